#include "spclust/vem.hpp"

#include "spclust/kernels.hpp"
#include "spclust/kmeans.hpp"
#include "spclust/seed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spclust {

namespace {

constexpr int kMaxBacktracks = 40;

double entropy(const Matrix& tau) {
    double h = 0.0;
    for (double v : tau.data())
        if (v > 0.0)
            h -= v * std::log(v);
    return h;
}

bool all_finite(const Matrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

} // namespace

void FitConfig::validate() const {
    if (!(em_tol > 0.0) || !(fp_tol > 0.0))
        throw std::invalid_argument("FitConfig: tolerances must be positive");
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("FitConfig: damping must lie in (0,1]");
    if (max_em_iters < 1 || max_fixed_point_iters < 1 || n_restarts < 1)
        throw std::invalid_argument("FitConfig: iteration counts must be >= 1");
    if (!(init_eps >= 0.0 && init_eps < 1.0) || !(hard_eps >= 0.0 && hard_eps < 1.0))
        throw std::invalid_argument("FitConfig: softening must lie in [0,1)");
}

InitResult init_partition(const InteractionNetwork& Y, int Q, std::uint64_t seed, double eps) {
    const std::size_t n = Y.size();
    if (Q < 1 || static_cast<std::size_t>(Q) > n)
        throw std::invalid_argument("init_partition: need 1 <= Q <= n (Q=" + std::to_string(Q) +
                                    ", n=" + std::to_string(n) + ")");
    if (Q == 1) {
        Partition p(std::vector<int>(n, 0), 1);
        return {SoftAssignment::from_partition(p), p, false};
    }
    Matrix rows = Y.values();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                s += Y(i, j);
        rows(i, i) = s / static_cast<double>(n - 1);
    }
    auto km = kmeans(rows, Q, seed, 50);
    Partition p(std::move(km.labels), Q);
    return {SoftAssignment::from_partition(p, eps), p, km.degenerate};
}

Partition classify(const Matrix& tau) {
    std::vector<int> labels(tau.rows());
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        const auto r = tau.row(i);
        labels[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return Partition(std::move(labels), static_cast<int>(tau.cols()));
}

Partition classify(const SoftAssignment& tau) { return classify(tau.matrix()); }

VemEngine::VemEngine(const InteractionNetwork& Y, const StructuralNetwork& X, EmissionKind kind,
                     FitConfig cfg)
    : Y_(Y), X_(X), kind_(kind), cfg_(cfg), features_(build_features(kind, Y)) {
    cfg_.validate();
    if (X.node_ids() != Y.node_ids())
        throw std::invalid_argument(
            "structural and interaction networks must share the same node ids in the same order");
}

std::vector<Matrix> VemEngine::products(const Matrix& tau) const {
    std::vector<Matrix> S(features_.phi.size());
    for (std::size_t k = 0; k < S.size(); ++k)
        kernels::omp::products(features_.phi[k], tau, S[k]);
    return S;
}

ObjectiveTerms VemEngine::evaluate_with(const Matrix& tau, const std::vector<Matrix>& S,
                                        const ModelParams& params, const std::vector<Matrix>& eta,
                                        double lambda) const {
    Matrix scores;
    kernels::omp::node_scores(S, eta, scores);
    ObjectiveTerms t;
    double pairs = 0.0, alpha_term = 0.0;
    for (std::size_t i = 0; i < tau.rows(); ++i)
        for (std::size_t q = 0; q < tau.cols(); ++q) {
            const double v = tau(i, q);
            if (v == 0.0)
                continue;
            pairs += v * scores(i, q);
            alpha_term += v * std::log(params.alpha[q]);
        }
    t.log_likelihood = alpha_term + 0.5 * pairs + features_.base_sum;
    t.penalty = penalty(tau, X_);
    t.entropy = entropy(tau);
    t.objective = t.log_likelihood - lambda * t.penalty;
    t.bound = t.objective + t.entropy;
    return t;
}

ObjectiveTerms VemEngine::evaluate(const Matrix& tau, const ModelParams& params,
                                   double lambda) const {
    return evaluate_with(tau, products(tau), params, natural_parameters(params.family), lambda);
}

Matrix VemEngine::log_scores(const ModelParams& params, const Matrix& tau) const {
    Matrix scores;
    kernels::omp::node_scores(products(tau), natural_parameters(params.family), scores);
    for (std::size_t i = 0; i < scores.rows(); ++i)
        for (std::size_t q = 0; q < scores.cols(); ++q)
            scores(i, q) += std::log(params.alpha[q]);
    return scores;
}

void VemEngine::report_non_finite(const ModelParams& params) const {
    const std::size_t n = Y_.size();
    const int Q = params.family.groups();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double y = Y_(i, j);
            if (kind_ == EmissionKind::OneInflatedGaussian && y == 0.0)
                y = kLogitZeroClamp;
            for (int q = 0; q < Q; ++q)
                for (int l = 0; l < Q; ++l) {
                    const double v = log_density(params.family, y, q, l);
                    if (!std::isfinite(v)) {
                        std::ostringstream os;
                        os << "non-finite log-density " << v << " at pair (" << Y_.node_ids()[i]
                           << ", " << Y_.node_ids()[j] << "), groups (" << q << ", " << l << ")";
                        throw std::runtime_error(os.str());
                    }
                }
        }
    throw std::runtime_error("non-finite E-step scores (parameters: sigma2=" +
                             std::to_string(params.family.sigma2) + ")");
}

EStepResult VemEngine::e_step(const ModelParams& params, const Matrix& tau_init,
                              double lambda) const {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("e_step: lambda must be >= 0");
    if (tau_init.rows() != Y_.size() ||
        tau_init.cols() != static_cast<std::size_t>(params.family.groups()))
        throw std::invalid_argument("e_step: tau shape does not match the problem");

    const auto eta = natural_parameters(params.family);
    std::vector<double> log_alpha(params.alpha.size());
    for (std::size_t q = 0; q < log_alpha.size(); ++q)
        log_alpha[q] = std::log(params.alpha[q]);

    Matrix tau = tau_init;
    auto S = products(tau);
    Matrix scores;
    kernels::omp::node_scores(S, eta, scores);
    if (!all_finite(scores))
        report_non_finite(params);

    auto cur = evaluate_with(tau, S, params, eta, lambda);
    EStepResult res;
    res.bound_before = cur.bound;

    if (cfg_.sweep == SweepOrder::Sequential) {
        sequential_sweeps(params, eta, log_alpha, tau, S, lambda, res);
        res.bound_after = evaluate_with(tau, S, params, eta, lambda).bound;
        res.tau = SoftAssignment(std::move(tau));
        return res;
    }

    Matrix target, cand(tau.rows(), tau.cols());
    std::vector<Matrix> S_cand(S.size());
    for (int it = 0; it < cfg_.max_fixed_point_iters; ++it) {
        res.iterations = it + 1;
        kernels::omp::fixed_point_update(scores, log_alpha, tau, X_.adjacency(), lambda, target);
        const auto S_target = products(target);

        double c = cfg_.damping;
        bool accepted = false;
        ObjectiveTerms val;
        for (int bt = 0; bt < kMaxBacktracks; ++bt, c *= 0.5) {
            for (std::size_t k = 0; k < tau.data().size(); ++k)
                cand.data()[k] = (1.0 - c) * tau.data()[k] + c * target.data()[k];
            for (std::size_t f = 0; f < S.size(); ++f) {
                S_cand[f] = S[f];
                for (std::size_t k = 0; k < S[f].data().size(); ++k)
                    S_cand[f].data()[k] = (1.0 - c) * S[f].data()[k] + c * S_target[f].data()[k];
            }
            val = evaluate_with(cand, S_cand, params, eta, lambda);
            if (val.bound >= cur.bound - 1e-12 * std::max(1.0, std::abs(cur.bound))) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No ascent left at machine precision.
            res.converged = true;
            break;
        }
        const double delta = max_abs_diff(cand, tau);
        std::swap(tau, cand);
        std::swap(S, S_cand);
        cur = val;
        kernels::omp::node_scores(S, eta, scores);
        if (delta < cfg_.fp_tol) {
            res.converged = true;
            break;
        }
    }
    // Clean up rounding drift in the row sums.
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        auto r = tau.row(i);
        double s = 0.0;
        for (double v : r)
            s += v;
        for (auto& v : r)
            v = std::clamp(v / s, 0.0, 1.0);
    }
    res.bound_after = cur.bound;
    res.tau = SoftAssignment(std::move(tau));
    return res;
}

void VemEngine::sequential_sweeps(const ModelParams& params, const std::vector<Matrix>& eta,
                                  std::span<const double> log_alpha, Matrix& tau,
                                  std::vector<Matrix>& S, double lambda, EStepResult& res) const {
    const std::size_t n = tau.rows(), Q = tau.cols();
    const auto& adj = X_.adjacency();
    std::vector<double> b(Q), t(Q), delta(Q);
    for (int it = 0; it < cfg_.max_fixed_point_iters; ++it) {
        res.iterations = it + 1;
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t q = 0; q < Q; ++q) {
                double s = log_alpha[q];
                for (std::size_t k = 0; k < S.size(); ++k) {
                    const auto e = eta[k].row(q);
                    const auto x = S[k].row(i);
                    for (std::size_t l = 0; l < Q; ++l)
                        s += e[l] * x[l];
                }
                double m = 0.0;
                for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e)
                    m += adj.weights[e] * tau(adj.targets[e], q);
                b[q] = s + 2.0 * lambda * m;
            }
            if (!std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); }))
                report_non_finite(params);
            kernels::penalized_row_optimum(b, 2.0 * lambda * adj.degree[i], t);

            auto row = tau.row(i);
            bool changed = false;
            for (std::size_t q = 0; q < Q; ++q) {
                delta[q] = t[q] - row[q];
                moved = std::max(moved, std::abs(delta[q]));
                changed = changed || delta[q] != 0.0;
                row[q] = t[q];
            }
            if (!changed)
                continue;
            // Rank-one refresh of S_k = phi_k * tau for the new row i.
            for (std::size_t k = 0; k < S.size(); ++k) {
                const Matrix& phi = features_.phi[k];
                Matrix& Sk = S[k];
                for (std::size_t r = 0; r < n; ++r) {
                    const double p = phi(r, i);
                    if (p == 0.0)
                        continue;
                    auto srow = Sk.row(r);
                    for (std::size_t q = 0; q < Q; ++q)
                        srow[q] += p * delta[q];
                }
            }
        }
        if (moved < cfg_.fp_tol) {
            res.converged = true;
            break;
        }
    }
    // The rank-one refreshes accumulate rounding; rebuild S once at the end.
    S = products(tau);
}

ModelParams VemEngine::m_step(const Matrix& tau, const ModelParams* previous) const {
    const auto T = cell_sums(features_, tau);
    std::vector<double> cols(tau.cols(), 0.0);
    for (std::size_t i = 0; i < tau.rows(); ++i)
        for (std::size_t q = 0; q < tau.cols(); ++q)
            cols[q] += tau(i, q);
    return fit_parameters(kind_, T, cols, previous);
}

FitResult VemEngine::fit_from(const Matrix& tau_init, double lambda) const {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("fit: lambda must be >= 0");
    const int Q = static_cast<int>(tau_init.cols());
    FitResult best;
    best.kind = kind_;
    best.lambda = lambda;
    best.Q = Q;

    Matrix tau = tau_init;
    ModelParams params = m_step(tau, nullptr);
    std::vector<TraceEntry> trace;
    Partition prev_part;
    double prev_obj = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (int it = 1; it <= cfg_.max_em_iters; ++it) {
        auto e = e_step(params, tau, lambda);
        Partition part = classify(e.tau);
        Matrix hard = SoftAssignment::from_partition(part, cfg_.hard_eps).matrix();
        ModelParams next = m_step(hard, &params);
        const double obj = evaluate(hard, next, lambda).objective;
        trace.push_back({e.bound_before, e.bound_after, obj});

        const bool stable = it > 1 && part == prev_part &&
                            std::abs(obj - prev_obj) <= cfg_.em_tol * std::max(1.0, std::abs(obj));
        if (!have_best || obj > best.objective || stable) {
            have_best = true;
            best.tau = e.tau;
            best.partition = part;
            best.params = next;
            best.objective = obj;
            best.em_iterations = it;
        }
        if (stable) {
            best.converged = true;
            break;
        }
        prev_part = std::move(part);
        prev_obj = obj;
        params = std::move(next);
        tau = std::move(hard);
    }
    best.trace = std::move(trace);
    best.penalty_of_hard_labels = penalty(best.partition, X_);
    return best;
}

FitResult VemEngine::fit(int Q, double lambda) const {
    if (Q < 1 || static_cast<std::size_t>(Q) > Y_.size())
        throw std::invalid_argument("fit: need 1 <= Q <= n");
    const int restarts = Q == 1 ? 1 : cfg_.n_restarts;
    FitResult best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
        const auto init = init_partition(Y_, Q, derive_seed(cfg_.seed, {static_cast<std::uint64_t>(Q),
                                                                      static_cast<std::uint64_t>(r)}),
                                         cfg_.init_eps);
        auto res = fit_from(init.tau.matrix(), lambda);
        res.degenerate_init = init.degenerate;
        if (!have || res.objective > best.objective) {
            best = std::move(res);
            have = true;
        }
    }
    return best;
}

SoftAssignment e_step(const InteractionNetwork& Y, const StructuralNetwork& X,
                      const ModelParams& params, const SoftAssignment& tau_init, double lambda,
                      const FitConfig& cfg) {
    VemEngine engine(Y, X, params.family.kind, cfg);
    return engine.e_step(params, tau_init.matrix(), lambda).tau;
}

FitResult run_vem(const InteractionNetwork& Y, const StructuralNetwork& X, int Q, double lambda,
                  EmissionKind kind, const FitConfig& cfg) {
    VemEngine engine(Y, X, kind, cfg);
    return engine.fit(Q, lambda);
}

StructuralNetwork empty_structure(const InteractionNetwork& Y) {
    return StructuralNetwork(Y.node_ids(), {});
}

} // namespace spclust
