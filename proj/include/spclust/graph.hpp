#pragma once

// Ecological (interaction) and structural (spatial) networks, labels, and the
// Laplacian-based label penalty.
//
// Edge-sum convention: every quadratic form here sums each unordered edge once
// (i < j). With hard labels on a binary structural network the penalty is
// therefore 2 x (number of discordant edges): a discordant edge contributes 1
// to the column of each endpoint's label.

#include "spclust/matrix.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spclust {

/// Dense symmetric matrix of observed pairwise interaction values. The
/// diagonal is never read by the likelihood.
class InteractionNetwork {
public:
    /// Throws std::invalid_argument if values is not square, n < 2, ids are
    /// not unique, or the off-diagonal body is not symmetric.
    InteractionNetwork(std::vector<std::string> node_ids, Matrix values);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& node_ids() const { return ids_; }
    const Matrix& values() const { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

private:
    std::vector<std::string> ids_;
    Matrix values_;
};

struct Edge {
    std::size_t i;
    std::size_t j;
    double w;
};

/// Compressed neighbor lists (both directions) of a structural network.
struct Adjacency {
    std::vector<std::size_t> offsets;  // size n + 1
    std::vector<std::size_t> targets;
    std::vector<double> weights;
    std::vector<double> degree;        // d_i = sum_j X_ij
};

/// Sparse symmetric proximity network over the same node set as an
/// InteractionNetwork. Edges are stored once with i < j, sorted.
class StructuralNetwork {
public:
    /// Edges may be given in either orientation. Throws std::invalid_argument
    /// on self-loops, negative or non-finite weights, duplicate pairs, or
    /// out-of-range endpoints.
    StructuralNetwork(std::vector<std::string> node_ids, std::vector<Edge> edges);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& node_ids() const { return ids_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Adjacency& adjacency() const { return adj_; }
    double mean_degree() const;

private:
    std::vector<std::string> ids_;
    std::vector<Edge> edges_;
    Adjacency adj_;
};

/// Hard labels in 0..Q-1.
struct Partition {
    std::vector<int> labels;
    int Q = 1;

    Partition() = default;
    Partition(std::vector<int> labels, int Q);

    std::size_t size() const { return labels.size(); }
    int n_nonempty() const;
    Matrix one_hot() const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Row-stochastic n x Q matrix of variational label posteriors.
class SoftAssignment {
public:
    SoftAssignment() = default;
    /// Throws std::invalid_argument unless each row sums to 1 within 1e-10
    /// and every entry lies in [0,1].
    explicit SoftAssignment(Matrix tau);

    /// One-hot labels softened to (1 - eps) on the label and eps/(Q-1) elsewhere.
    static SoftAssignment from_partition(const Partition& p, double eps = 0.0);

    const Matrix& matrix() const { return tau_; }
    std::size_t size() const { return tau_.rows(); }
    int groups() const { return static_cast<int>(tau_.cols()); }

private:
    Matrix tau_;
};

/// L_X = D - X as a dense matrix.
Matrix laplacian(const StructuralNetwork& X);

/// Sum over edges of w_ij (u_i - u_j)^2, i.e. u' L_X u.
double local_variance(std::span<const double> u, const StructuralNetwork& X);

/// Sum over groups of the local variance of each column of tau (or of Z).
double penalty(const Matrix& tau, const StructuralNetwork& X);
double penalty(const SoftAssignment& tau, const StructuralNetwork& X);
double penalty(const Partition& z, const StructuralNetwork& X);

} // namespace spclust
