#include "spclust/emission.hpp"

#include "spclust/kernels.hpp"
#include "spclust/log.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spclust {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double clamp_prob(double p) { return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor); }

double gaussian_log(double x, double mu, double sigma2) {
    const double d = x - mu;
    return -0.5 * (kLog2Pi + std::log(sigma2)) - d * d / (2.0 * sigma2);
}

bool is_nonneg_integer(double y) { return y >= 0.0 && std::floor(y) == y; }

} // namespace

std::string_view to_string(EmissionKind kind) {
    switch (kind) {
    case EmissionKind::Gaussian: return "gaussian";
    case EmissionKind::Bernoulli: return "bernoulli";
    case EmissionKind::Poisson: return "poisson";
    case EmissionKind::OneInflatedGaussian: return "inflated-gaussian";
    }
    return "unknown";
}

EmissionKind parse_emission_kind(std::string_view name) {
    if (name == "gaussian") return EmissionKind::Gaussian;
    if (name == "bernoulli") return EmissionKind::Bernoulli;
    if (name == "poisson") return EmissionKind::Poisson;
    if (name == "inflated-gaussian") return EmissionKind::OneInflatedGaussian;
    throw std::invalid_argument("unknown emission family '" + std::string(name) + "'");
}

double logit(double y) { return std::log(y / (1.0 - y)); }

double log_density(const EmissionFamily& f, double y, int q, int l) {
    const auto Q = f.groups();
    if (q < 0 || l < 0 || q >= Q || l >= Q)
        throw std::out_of_range("log_density: group index out of range");
    const auto uq = static_cast<std::size_t>(q), ul = static_cast<std::size_t>(l);
    switch (f.kind) {
    case EmissionKind::Gaussian:
        if (!(f.sigma2 > 0.0))
            throw std::domain_error("log_density: sigma2 must be positive");
        return gaussian_log(y, f.location(uq, ul), f.sigma2);
    case EmissionKind::Bernoulli: {
        if (y != 0.0 && y != 1.0)
            throw std::domain_error("log_density: Bernoulli value must be 0 or 1");
        const double p = clamp_prob(f.location(uq, ul));
        return y == 1.0 ? std::log(p) : std::log1p(-p);
    }
    case EmissionKind::Poisson: {
        if (!is_nonneg_integer(y))
            throw std::domain_error("log_density: Poisson value must be a nonnegative integer");
        const double r = std::max(f.location(uq, ul), kRateFloor);
        return y * std::log(r) - r - std::lgamma(y + 1.0);
    }
    case EmissionKind::OneInflatedGaussian: {
        if (!(f.sigma2 > 0.0))
            throw std::domain_error("log_density: sigma2 must be positive");
        if (!(y > 0.0 && y <= 1.0))
            throw std::domain_error("log_density: inflated-Gaussian value must lie in (0,1]");
        const double pi = clamp_prob(f.inflation(uq, ul));
        if (y == 1.0)
            return std::log(pi);
        return std::log1p(-pi) + gaussian_log(logit(y), f.location(uq, ul), f.sigma2) -
               std::log(y * (1.0 - y));
    }
    }
    throw std::logic_error("log_density: unhandled family");
}

std::size_t feature_count(EmissionKind kind) {
    switch (kind) {
    case EmissionKind::Gaussian: return 3;
    case EmissionKind::Bernoulli: return 2;
    case EmissionKind::Poisson: return 2;
    case EmissionKind::OneInflatedGaussian: return 4;
    }
    return 0;
}

FeatureMaps build_features(EmissionKind kind, const InteractionNetwork& Y) {
    const std::size_t n = Y.size();
    FeatureMaps fm;
    fm.kind = kind;
    fm.phi.assign(feature_count(kind), Matrix(n, n));
    std::size_t clamped = 0;
    const auto& ids = Y.node_ids();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double y = Y(i, j);
            auto set = [&](std::size_t k, double v) {
                fm.phi[k](i, j) = v;
                fm.phi[k](j, i) = v;
            };
            switch (kind) {
            case EmissionKind::Gaussian:
                set(0, 1.0);
                set(1, y);
                set(2, y * y);
                break;
            case EmissionKind::Bernoulli:
                if (y != 0.0 && y != 1.0)
                    throw DataError("Bernoulli family needs 0/1 values; got " + std::to_string(y) +
                                    " at (" + ids[i] + ", " + ids[j] + ")");
                set(0, 1.0);
                set(1, y);
                break;
            case EmissionKind::Poisson:
                if (!is_nonneg_integer(y))
                    throw DataError("Poisson family needs nonnegative integer values; got " +
                                    std::to_string(y) + " at (" + ids[i] + ", " + ids[j] + ")");
                set(0, 1.0);
                set(1, y);
                fm.base_sum -= std::lgamma(y + 1.0);
                break;
            case EmissionKind::OneInflatedGaussian: {
                if (!(y >= 0.0 && y <= 1.0))
                    throw DataError("inflated-Gaussian family needs values in [0,1]; got " +
                                    std::to_string(y) + " at (" + ids[i] + ", " + ids[j] + ")");
                if (y == 1.0) {
                    set(0, 1.0);
                    break;
                }
                if (y == 0.0) {
                    y = kLogitZeroClamp;
                    ++clamped;
                }
                const double t = logit(y);
                set(1, 1.0);
                set(2, t);
                set(3, t * t);
                fm.base_sum -= std::log(y * (1.0 - y));
                break;
            }
            }
        }
    if (clamped > 0)
        warn(std::to_string(clamped) + " interaction value(s) equal to 0 clamped to " +
             std::to_string(kLogitZeroClamp) + " before the logit transform");
    return fm;
}

std::vector<Matrix> natural_parameters(const EmissionFamily& f) {
    const auto Q = static_cast<std::size_t>(f.groups());
    std::vector<Matrix> eta(feature_count(f.kind), Matrix(Q, Q));
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t l = 0; l < Q; ++l) {
            const double loc = f.location(q, l);
            switch (f.kind) {
            case EmissionKind::Gaussian:
                eta[0](q, l) = -0.5 * (kLog2Pi + std::log(f.sigma2)) - loc * loc / (2.0 * f.sigma2);
                eta[1](q, l) = loc / f.sigma2;
                eta[2](q, l) = -1.0 / (2.0 * f.sigma2);
                break;
            case EmissionKind::Bernoulli: {
                const double p = clamp_prob(loc);
                eta[0](q, l) = std::log1p(-p);
                eta[1](q, l) = std::log(p) - std::log1p(-p);
                break;
            }
            case EmissionKind::Poisson: {
                const double r = std::max(loc, kRateFloor);
                eta[0](q, l) = -r;
                eta[1](q, l) = std::log(r);
                break;
            }
            case EmissionKind::OneInflatedGaussian: {
                const double pi = clamp_prob(f.inflation(q, l));
                eta[0](q, l) = std::log(pi);
                eta[1](q, l) = std::log1p(-pi) - 0.5 * (kLog2Pi + std::log(f.sigma2)) -
                               loc * loc / (2.0 * f.sigma2);
                eta[2](q, l) = loc / f.sigma2;
                eta[3](q, l) = -1.0 / (2.0 * f.sigma2);
                break;
            }
            }
        }
    return eta;
}

std::vector<Matrix> cell_sums(const FeatureMaps& features, const Matrix& tau) {
    std::vector<Matrix> out(features.phi.size());
    Matrix S;
    for (std::size_t k = 0; k < features.phi.size(); ++k) {
        kernels::omp::products(features.phi[k], tau, S);
        kernels::omp::cell_sums(tau, S, out[k]);
    }
    return out;
}

ModelParams fit_parameters(EmissionKind kind, const std::vector<Matrix>& T,
                           const std::vector<double>& column_sums, const ModelParams* previous) {
    if (T.size() != feature_count(kind))
        throw std::invalid_argument("fit_parameters: wrong number of cell sums");
    const std::size_t Q = T[0].rows();
    if (column_sums.size() != Q)
        throw std::invalid_argument("fit_parameters: column sums do not match Q");
    if (previous && (previous->family.kind != kind ||
                     static_cast<std::size_t>(previous->family.groups()) != Q))
        previous = nullptr;

    ModelParams out;
    double n = 0.0;
    for (double c : column_sums)
        n += c;
    out.alpha.resize(Q);
    for (std::size_t q = 0; q < Q; ++q)
        out.alpha[q] = column_sums[q] / n;

    EmissionFamily& f = out.family;
    f.kind = kind;
    f.location = Matrix(Q, Q);
    if (kind == EmissionKind::OneInflatedGaussian)
        f.inflation = Matrix(Q, Q);

    auto total = [&](const Matrix& m) {
        double s = 0.0;
        for (double v : m.data())
            s += v;
        return s;
    };

    // Index of the weight and first-moment features for the location block.
    const bool inflated = kind == EmissionKind::OneInflatedGaussian;
    const std::size_t w_idx = inflated ? 1 : 0;
    const std::size_t m_idx = inflated ? 2 : 1;
    const double w_all = total(T[w_idx]);
    const double pooled = w_all > 0.0 ? total(T[m_idx]) / w_all : 0.0;
    const double pooled_pi = inflated && (total(T[0]) + w_all) > 0.0
                                 ? total(T[0]) / (total(T[0]) + w_all)
                                 : 0.0;

    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t l = q; l < Q; ++l) {
            const double w = T[w_idx](q, l);
            double loc;
            bool frozen = false;
            if (w < kEmptyCellWeight) {
                frozen = true;
                loc = previous ? previous->family.location(q, l) : pooled;
            } else {
                loc = T[m_idx](q, l) / w;
            }
            f.location(q, l) = f.location(l, q) = loc;
            if (inflated) {
                const double all = T[0](q, l) + w;
                double pi;
                if (all < kEmptyCellWeight) {
                    frozen = true;
                    pi = previous ? previous->family.inflation(q, l) : pooled_pi;
                } else {
                    pi = T[0](q, l) / all;
                }
                f.inflation(q, l) = f.inflation(l, q) = pi;
            }
            if (frozen)
                out.frozen_cells.emplace_back(static_cast<int>(q), static_cast<int>(l));
        }

    if (kind == EmissionKind::Gaussian || inflated) {
        const std::size_t s_idx = inflated ? 3 : 2;
        double rss = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t l = 0; l < Q; ++l) {
                const double mu = f.location(q, l);
                rss += T[s_idx](q, l) - 2.0 * mu * T[m_idx](q, l) + mu * mu * T[w_idx](q, l);
            }
        if (w_all > 0.0)
            f.sigma2 = std::max(rss / w_all, kVarianceFloor);
        else
            f.sigma2 = previous ? previous->family.sigma2 : 1.0;
    }
    return out;
}

ModelParams m_step(EmissionKind kind, const SoftAssignment& tau, const InteractionNetwork& Y,
                   const ModelParams* previous) {
    if (tau.size() != Y.size())
        throw std::invalid_argument("m_step: tau has " + std::to_string(tau.size()) +
                                    " rows, network has " + std::to_string(Y.size()) + " nodes");
    const auto features = build_features(kind, Y);
    const auto T = cell_sums(features, tau.matrix());
    std::vector<double> cols(static_cast<std::size_t>(tau.groups()), 0.0);
    for (std::size_t i = 0; i < tau.size(); ++i)
        for (std::size_t q = 0; q < cols.size(); ++q)
            cols[q] += tau.matrix()(i, q);
    return fit_parameters(kind, T, cols, previous);
}

double expected_log_likelihood(const ModelParams& params, const Matrix& tau,
                               const InteractionNetwork& Y) {
    const std::size_t n = Y.size(), Q = tau.cols();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t q = 0; q < Q; ++q)
            if (tau(i, q) > 0.0)
                s += tau(i, q) * std::log(params.alpha[q]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double y = Y(i, j);
            if (params.family.kind == EmissionKind::OneInflatedGaussian && y == 0.0)
                y = kLogitZeroClamp;
            for (std::size_t q = 0; q < Q; ++q) {
                if (tau(i, q) == 0.0)
                    continue;
                for (std::size_t l = 0; l < Q; ++l) {
                    const double w = tau(i, q) * tau(j, l);
                    if (w != 0.0)
                        s += w * log_density(params.family, y, static_cast<int>(q),
                                             static_cast<int>(l));
                }
            }
        }
    return s;
}

int emission_parameter_count(EmissionKind kind, int Q) {
    const int cells = Q * (Q + 1) / 2;
    switch (kind) {
    case EmissionKind::Gaussian: return cells + 1;
    case EmissionKind::Bernoulli: return cells;
    case EmissionKind::Poisson: return cells;
    case EmissionKind::OneInflatedGaussian: return 2 * cells + 1;
    }
    return cells;
}

} // namespace spclust
