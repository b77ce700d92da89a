#pragma once

// Two spatial components joined by a single bridge edge, labels that start
// on the components and are then swapped pairwise to create spatial
// discordance, and Gaussian interactions with within mean mu, between mean
// nu and standard deviation sigma.

#include "spclust/graph.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace spclust {

struct Point {
    double x;
    double y;
};

struct SimDesign {
    int n_per_component = 50;
    int Q = 2;
    std::vector<double> alpha_true{0.5, 0.5};
    double mu = 0.2;  // within-group mean
    double nu = 0.0;  // between-group mean
    double sigma = 0.2;
    int n_swap_pairs = 0;
    std::uint64_t seed = 1;
    /// Gabriel edges weighted max(d) - d instead of 1.
    bool distance_weights = false;

    double delta() const { return (mu - nu) / sigma; }
    /// Sets mu = nu + delta * sigma.
    void set_delta(double delta);
    void validate() const;
};

/// Throws std::invalid_argument on fewer than 2 points or duplicates.
StructuralNetwork gabriel_graph(const std::vector<Point>& points,
                                std::vector<std::string> node_ids = {});

struct TwoComponentLayout {
    StructuralNetwork X;
    std::vector<Point> points;
    std::vector<int> component;  // 0 or 1 per node
    std::pair<std::size_t, std::size_t> bridge;
};

/// Uniform points in [0,1]^2 and [3,4]x[0,1], a Gabriel graph inside each,
/// and one bridge between the closest cross-component pair. Node ids are
/// "n000", "n001", ...
TwoComponentLayout make_two_component(const SimDesign& design);

/// Labels equal to the components, then n_swap_pairs disjoint (component 0,
/// component 1) node pairs exchange labels.
Partition assign_and_swap(const SimDesign& design, const TwoComponentLayout& layout);

/// One Gaussian draw per unordered pair: mean mu within a label, nu between.
InteractionNetwork sample_interactions(const Partition& truth, const SimDesign& design,
                                       const std::vector<std::string>& node_ids);

/// Fraction of edges whose endpoints carry different labels (weights
/// ignored). Throws std::invalid_argument for a network without edges.
double spatial_discordance(const Partition& z, const StructuralNetwork& X);

struct SimReplicate {
    TwoComponentLayout layout;
    Partition truth;
    InteractionNetwork Y;
};

SimReplicate simulate_replicate(const SimDesign& design);

} // namespace spclust
