#include "spclust/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace spclust {

void PathConfig::validate() const {
    if (q_min < 1 || q_max < q_min)
        throw std::invalid_argument("PathConfig: need 1 <= q_min <= q_max");
    if (stability_window < 2)
        throw std::invalid_argument("PathConfig: stability_window must be >= 2");
    if (K < 0)
        throw std::invalid_argument("PathConfig: K must be >= 0");
    if (!lambda_grid.empty()) {
        if (lambda_grid.front() != 0.0)
            throw std::invalid_argument("PathConfig: lambda grid must start at 0");
        for (std::size_t k = 1; k < lambda_grid.size(); ++k)
            if (!(lambda_grid[k] > lambda_grid[k - 1]))
                throw std::invalid_argument("PathConfig: lambda grid must increase strictly");
    }
}

double default_lambda0(const VemEngine& engine, const FitResult& fit0) {
    const double deg = engine.structure().mean_degree();
    const double fallback = deg > 0.0 ? 1.0 / deg : 1.0;
    if (fit0.Q < 2 || deg <= 0.0)
        return fallback;
    const Matrix s = engine.log_scores(fit0.params, fit0.tau.matrix());
    std::vector<double> margins(s.rows());
    for (std::size_t i = 0; i < s.rows(); ++i) {
        std::vector<double> r(s.row(i).begin(), s.row(i).end());
        std::partial_sort(r.begin(), r.begin() + 2, r.end(), std::greater<>());
        margins[i] = std::isfinite(r[1]) ? r[0] - r[1] : 0.0;
    }
    auto mid = margins.begin() + static_cast<std::ptrdiff_t>(margins.size() / 2);
    std::nth_element(margins.begin(), mid, margins.end());
    const double median = *mid;
    if (!(median > 0.0) || !std::isfinite(median))
        return fallback;
    return median / (2.0 * deg);
}

std::vector<double> make_lambda_grid(double lambda0, int K) {
    if (!(lambda0 > 0.0))
        throw std::invalid_argument("lambda0 must be positive");
    std::vector<double> g{0.0};
    for (int k = 0; k <= K; ++k)
        g.push_back(std::ldexp(lambda0, k));
    return g;
}

LambdaPath lambda_path(const VemEngine& engine, int Q, const PathConfig& path_cfg) {
    path_cfg.validate();
    LambdaPath path;
    path.fits.push_back(engine.fit(Q, 0.0));
    if (!path_cfg.lambda_grid.empty())
        path.grid = path_cfg.lambda_grid;
    else
        path.grid = make_lambda_grid(path_cfg.lambda0 > 0.0
                                         ? path_cfg.lambda0
                                         : default_lambda0(engine, path.fits.front()),
                                     path_cfg.K);
    if (path.grid.size() == 1)
        return path;

    int run = 1;
    for (std::size_t k = 1; k < path.grid.size(); ++k) {
        auto fit = engine.fit_from(path.fits.back().tau.matrix(), path.grid[k]);
        fit.degenerate_init = path.fits.back().degenerate_init;
        run = fit.partition == path.fits.back().partition ? run + 1 : 1;
        path.fits.push_back(std::move(fit));
        if (run >= path_cfg.stability_window)
            return path;
    }
    path.no_lambda_max = true;
    return path;
}

LambdaPath lambda_path(const InteractionNetwork& Y, const StructuralNetwork& X, int Q,
                       EmissionKind kind, const FitConfig& cfg, const PathConfig& path_cfg) {
    VemEngine engine(Y, X, kind, cfg);
    return lambda_path(engine, Q, path_cfg);
}

double icl(const FitResult& fit, const InteractionNetwork& Y) {
    const double n = static_cast<double>(Y.size());
    const double ll = expected_log_likelihood(fit.params, fit.partition.one_hot(), Y);
    const double p = emission_parameter_count(fit.kind, fit.Q);
    return ll - 0.5 * p * std::log(n * (n - 1.0) / 2.0) - 0.5 * (fit.Q - 1) * std::log(n);
}

const FitResult* ModelSelection::fit_for(int Q) const {
    for (const auto& p : paths)
        if (p.at_lambda_max().Q == Q)
            return &p.at_lambda_max();
    return nullptr;
}

ModelSelection select_model(const InteractionNetwork& Y, const StructuralNetwork& X,
                            EmissionKind kind, const FitConfig& cfg, const PathConfig& path_cfg) {
    path_cfg.validate();
    const int q_max = std::min<int>(path_cfg.q_max, static_cast<int>(Y.size()));
    if (q_max < path_cfg.q_min)
        throw std::invalid_argument("select_model: q_min exceeds the node count");
    const VemEngine engine(Y, X, kind, cfg);

    const auto count = static_cast<std::size_t>(q_max - path_cfg.q_min + 1);
    ModelSelection sel;
    sel.paths.resize(count);
    std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
        const auto uk = static_cast<std::size_t>(k);
        try {
            sel.paths[uk] = lambda_path(engine, path_cfg.q_min + static_cast<int>(k), path_cfg);
            for (auto& f : sel.paths[uk].fits)
                f.icl = icl(f, Y);
        } catch (...) {
            errors[uk] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    for (std::size_t k = 1; k < count; ++k)
        if (sel.paths[k].at_lambda_max().icl > sel.paths[sel.best].at_lambda_max().icl)
            sel.best = k;
    return sel;
}

} // namespace spclust
