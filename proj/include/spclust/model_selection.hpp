#pragma once

#include "spclust/vem.hpp"

#include <optional>
#include <vector>

namespace spclust {

struct PathConfig {
    /// Explicit grid; must start at 0 and increase strictly. When empty, the
    /// grid is {0} U {lambda0 * 2^k, k = 0..K}.
    std::vector<double> lambda_grid;
    /// <= 0 selects the data-driven default (see default_lambda0).
    double lambda0 = 0.0;
    int K = 12;
    int q_min = 1;
    int q_max = 4;
    int stability_window = 2;

    void validate() const;
};

struct LambdaPath {
    std::vector<FitResult> fits;  // up to and including lambda_max
    std::vector<double> grid;     // the grid that was used
    bool no_lambda_max = false;   // grid exhausted without a stable partition

    const FitResult& at_lambda_max() const { return fits.back(); }
};

/// Median over nodes of the gap between the two best E-step log-scores of a
/// lambda = 0 fit, divided by 2 x the mean weighted degree of X. A node that
/// disagrees with all its neighbours is then pushed by about its typical
/// likelihood margin at the first nonzero lambda. Falls back to 1 / mean
/// degree (or 1) when Q = 1 or the margin is zero.
double default_lambda0(const VemEngine& engine, const FitResult& fit0);

std::vector<double> make_lambda_grid(double lambda0, int K);

/// Fits along the grid, warm-starting each lambda from the previous tau.
/// Stops at the first grid value whose hard partition equals that of the
/// previous stability_window - 1 values.
LambdaPath lambda_path(const VemEngine& engine, int Q, const PathConfig& path_cfg);
LambdaPath lambda_path(const InteractionNetwork& Y, const StructuralNetwork& X, int Q,
                       EmissionKind kind, const FitConfig& cfg, const PathConfig& path_cfg);

/// Integrated classification likelihood of the hard partition:
///   log L(Y, Z; gamma) - P/2 log(n(n-1)/2) - (Q-1)/2 log n
/// with P = emission_parameter_count(kind, Q).
double icl(const FitResult& fit, const InteractionNetwork& Y);

struct ModelSelection {
    std::vector<LambdaPath> paths;  // one per Q in [q_min, q_max]
    std::size_t best = 0;           // index into paths

    const FitResult& selected() const { return paths[best].at_lambda_max(); }
    /// Fit at lambda_max for a given Q, if Q was in range.
    const FitResult* fit_for(int Q) const;
};

/// Runs lambda_path for every Q, scores the lambda_max fit by ICL, and keeps
/// the best (ties go to the smaller Q). Different Q run concurrently.
ModelSelection select_model(const InteractionNetwork& Y, const StructuralNetwork& X,
                            EmissionKind kind, const FitConfig& cfg, const PathConfig& path_cfg);

} // namespace spclust
