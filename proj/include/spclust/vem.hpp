#pragma once

// Regularized variational EM with a classification step.
//
// Each EM iteration runs
//   1. E-step: damped Jacobi fixed point on tau for the penalized bound
//        F(tau) = sum_iq tau_iq log alpha_q
//               + sum_{i<j} sum_ql tau_iq tau_jl log f(Y_ij; theta_ql)
//               - lambda * sum_q sum_{edges} X_ij (tau_iq - tau_jq)^2
//               + H(tau),
//      with backtracking on the damping so F never decreases;
//   2. classification: MAP labels, re-softened to 1 - eps / eps/(Q-1);
//   3. M-step on the re-softened labels.
// The recorded objective is F without the entropy term at the re-softened
// labels.

#include "spclust/emission.hpp"
#include "spclust/graph.hpp"
#include "spclust/matrix.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace spclust {

enum class SweepOrder {
    /// Each node in turn is set to the exact maximizer of F given all other
    /// rows. F never decreases.
    Sequential,
    /// All rows updated from the previous iterate, damped, with backtracking
    /// on the damping.
    Jacobi,
};

struct FitConfig {
    int max_em_iters = 100;
    int max_fixed_point_iters = 200;
    /// Relative change of the objective below which EM stops (with an
    /// unchanged partition).
    double em_tol = 1e-6;
    /// Largest |delta tau| below which the fixed point stops.
    double fp_tol = 1e-8;
    double damping = 0.5;  // Jacobi only
    SweepOrder sweep = SweepOrder::Sequential;
    int n_restarts = 4;
    std::uint64_t seed = 1;
    /// Softening of the k-means start.
    double init_eps = 0.1;
    /// Softening applied after each classification step.
    double hard_eps = 1e-3;

    /// Throws std::invalid_argument on nonpositive tolerances or damping
    /// outside (0,1].
    void validate() const;
};

struct TraceEntry {
    double bound_before_estep;
    double bound_after_estep;
    double objective;  // after classification and M-step
};

struct FitResult {
    SoftAssignment tau;  // last E-step output, before classification
    Partition partition;
    ModelParams params;
    EmissionKind kind = EmissionKind::Gaussian;
    double lambda = 0.0;
    int Q = 1;
    std::vector<TraceEntry> trace;
    bool converged = false;
    int em_iterations = 0;
    double objective = -std::numeric_limits<double>::infinity();
    double penalty_of_hard_labels = 0.0;
    double icl = std::numeric_limits<double>::quiet_NaN();
    bool degenerate_init = false;
};

struct InitResult {
    SoftAssignment tau;
    Partition partition;
    bool degenerate = false;
};

/// k-means (k-means++ seeding, at most 50 Lloyd iterations) on the rows of Y,
/// with each diagonal entry replaced by its row's off-diagonal mean.
InitResult init_partition(const InteractionNetwork& Y, int Q, std::uint64_t seed,
                          double eps = 0.1);

/// MAP labels; ties go to the smallest group index.
Partition classify(const Matrix& tau);
Partition classify(const SoftAssignment& tau);

struct ObjectiveTerms {
    double log_likelihood = 0.0;  // alpha and pair terms
    double penalty = 0.0;         // soft penalty of tau
    double entropy = 0.0;
    double objective = 0.0;       // log_likelihood - lambda * penalty
    double bound = 0.0;           // objective + entropy
};

struct EStepResult {
    SoftAssignment tau;
    int iterations = 0;
    bool converged = false;
    double bound_before = 0.0;
    double bound_after = 0.0;
};

/// Holds the precomputed feature maps of one (Y, X, family) problem. Y and X
/// are referenced, not copied, and must outlive the engine.
class VemEngine {
public:
    VemEngine(const InteractionNetwork& Y, const StructuralNetwork& X, EmissionKind kind,
              FitConfig cfg);

    const FitConfig& config() const { return cfg_; }
    const InteractionNetwork& interactions() const { return Y_; }
    const StructuralNetwork& structure() const { return X_; }
    EmissionKind kind() const { return kind_; }

    /// Throws std::runtime_error naming the offending (i, j, q, l) if a
    /// log-density is not finite.
    EStepResult e_step(const ModelParams& params, const Matrix& tau_init, double lambda) const;
    ModelParams m_step(const Matrix& tau, const ModelParams* previous) const;
    ObjectiveTerms evaluate(const Matrix& tau, const ModelParams& params, double lambda) const;

    /// log alpha_q + sum_{j,l} tau_jl log f(Y_ij; theta_ql) (penalty excluded).
    Matrix log_scores(const ModelParams& params, const Matrix& tau) const;

    /// Best of cfg.n_restarts k-means starts.
    FitResult fit(int Q, double lambda) const;
    /// Single run from a given soft assignment (warm start).
    FitResult fit_from(const Matrix& tau_init, double lambda) const;

private:
    std::vector<Matrix> products(const Matrix& tau) const;
    ObjectiveTerms evaluate_with(const Matrix& tau, const std::vector<Matrix>& S,
                                 const ModelParams& params, const std::vector<Matrix>& eta,
                                 double lambda) const;
    void sequential_sweeps(const ModelParams& params, const std::vector<Matrix>& eta,
                           std::span<const double> log_alpha, Matrix& tau, std::vector<Matrix>& S,
                           double lambda, EStepResult& res) const;
    [[noreturn]] void report_non_finite(const ModelParams& params) const;

    const InteractionNetwork& Y_;
    const StructuralNetwork& X_;
    EmissionKind kind_;
    FitConfig cfg_;
    FeatureMaps features_;
};

SoftAssignment e_step(const InteractionNetwork& Y, const StructuralNetwork& X,
                      const ModelParams& params, const SoftAssignment& tau_init, double lambda,
                      const FitConfig& cfg);

FitResult run_vem(const InteractionNetwork& Y, const StructuralNetwork& X, int Q, double lambda,
                  EmissionKind kind, const FitConfig& cfg);

/// Network with the node set of Y and no edges.
StructuralNetwork empty_structure(const InteractionNetwork& Y);

} // namespace spclust
