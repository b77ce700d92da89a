#pragma once

// Simulation grid: for every (delta, swap pairs) cell and replicate, simulate
// a two-component design and fit it with and without the spatial penalty.

#include "spclust/model_selection.hpp"
#include "spclust/simulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spclust {

struct SweepGrid {
    std::vector<double> deltas;
    std::vector<int> swap_pairs;
    int reps = 50;
    SimDesign base;  // n_per_component, sigma, nu; mu is set per cell from delta
    FitConfig fit;
    PathConfig path;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SweepRow {
    double delta = 0.0;
    int swap_pairs = 0;
    int rep = 0;
    bool penalized = false;
    double discordance = 0.0;
    // Scores of the fit with the design's number of groups.
    double ari_x = 0.0;
    double ari_y = 0.0;
    int q_selected = 1;
    // Scores of the ICL-selected fit.
    double ari_x_selected = 0.0;
    double ari_y_selected = 0.0;
    double lambda_max = 0.0;
};

/// Design of replicate `rep` in cell (delta index, swap index). Seeds depend
/// only on grid.seed and the indices, never on scheduling.
SimDesign replicate_design(const SweepGrid& grid, std::size_t delta_index, std::size_t swap_index,
                           int rep);

/// Rows ordered by delta, swap pairs, replicate, then unpenalized before
/// penalized. Replicates run concurrently.
std::vector<SweepRow> run_sweep(const SweepGrid& grid);

/// Scores one replicate (both rows).
std::vector<SweepRow> run_replicate(const SweepGrid& grid, std::size_t delta_index,
                                    std::size_t swap_index, int rep);

std::string sweep_csv_header();
std::string sweep_csv_line(const SweepRow& row);

} // namespace spclust
