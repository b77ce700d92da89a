#pragma once

// Conditional distributions f(y; theta_ql) for interaction values.
//
// Every family is written in the linear form
//     log f(y; theta) = sum_k eta_k(theta) * phi_k(y) + h(y)
// so that the E-step needs only the products Phi_k * tau (see kernels.hpp)
// and the M-step only the weighted cell sums tau' Phi_k tau.
//
//   family                 phi(y)                         h(y)
//   Gaussian               (1, y, y^2)                    0
//   Bernoulli              (1, y)                         0
//   Poisson                (1, y)                         -log y!
//   OneInflatedGaussian    (I, J, J t, J t^2)             -J log(y (1 - y))
// with I = [y == 1], J = 1 - I, t = logit(y).

#include "spclust/graph.hpp"
#include "spclust/matrix.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spclust {

enum class EmissionKind { Gaussian, Bernoulli, Poisson, OneInflatedGaussian };

std::string_view to_string(EmissionKind kind);
/// Accepts gaussian | bernoulli | poisson | inflated-gaussian.
EmissionKind parse_emission_kind(std::string_view name);

/// Probabilities and rates are clamped to these bounds wherever a logarithm
/// is taken, so that cells with no observed successes stay finite.
inline constexpr double kProbabilityFloor = 1e-12;
inline constexpr double kRateFloor = 1e-12;
inline constexpr double kVarianceFloor = 1e-8;
/// Interaction values of exactly 0 are moved here before the logit transform.
inline constexpr double kLogitZeroClamp = 1e-6;
/// Cells whose total pair weight is below this keep their previous value.
inline constexpr double kEmptyCellWeight = 1e-12;

/// Parameters theta of one emission family. All Q x Q blocks are symmetric.
struct EmissionFamily {
    EmissionKind kind = EmissionKind::Gaussian;
    Matrix location;   // mu (Gaussian, inflated), p (Bernoulli) or rate (Poisson)
    Matrix inflation;  // pi_ql, inflated family only
    double sigma2 = 1.0;

    int groups() const { return static_cast<int>(location.rows()); }
};

/// Group proportions plus emission parameters.
struct ModelParams {
    std::vector<double> alpha;
    EmissionFamily family;
    /// Cells (q <= l) that had no weight at the last M-step and kept their
    /// previous value.
    std::vector<std::pair<int, int>> frozen_cells;
};

double logit(double y);

/// log f(y; theta_ql). Throws std::domain_error when y is outside the
/// family's support or sigma2 <= 0.
double log_density(const EmissionFamily& family, double y, int q, int l);

std::size_t feature_count(EmissionKind kind);

/// Feature matrices phi_k(Y_ij) (zero diagonal) and the constant sum of h over
/// unordered pairs.
struct FeatureMaps {
    EmissionKind kind = EmissionKind::Gaussian;
    std::vector<Matrix> phi;
    double base_sum = 0.0;
};

/// Throws DataError when an off-diagonal value is outside the family's
/// support. Zeros under the inflated family are clamped with a warning.
FeatureMaps build_features(EmissionKind kind, const InteractionNetwork& Y);

/// eta_k(theta_ql) as Q x Q matrices, one per feature.
std::vector<Matrix> natural_parameters(const EmissionFamily& family);

/// Closed-form maximizer of the expected complete-data log-likelihood given
/// ordered-pair cell sums T_k = tau' Phi_k tau and column sums of tau.
ModelParams fit_parameters(EmissionKind kind, const std::vector<Matrix>& cell_sums,
                           const std::vector<double>& column_sums, const ModelParams* previous);

/// Cell sums tau' Phi_k tau for every feature.
std::vector<Matrix> cell_sums(const FeatureMaps& features, const Matrix& tau);

/// M-step: alpha_q = mean of column q of tau, theta by weighted moments.
/// `previous` supplies values for empty cells; without it the pooled
/// estimate over all pairs is used.
ModelParams m_step(EmissionKind kind, const SoftAssignment& tau, const InteractionNetwork& Y,
                   const ModelParams* previous = nullptr);

/// sum_iq tau_iq log alpha_q + sum_{i<j} sum_ql tau_iq tau_jl log f(Y_ij; theta_ql),
/// evaluated pair by pair with log_density.
double expected_log_likelihood(const ModelParams& params, const Matrix& tau,
                               const InteractionNetwork& Y);

/// Number of free emission parameters for Q groups.
int emission_parameter_count(EmissionKind kind, int Q);

} // namespace spclust
