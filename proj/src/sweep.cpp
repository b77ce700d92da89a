#include "spclust/sweep.hpp"

#include "spclust/io.hpp"
#include "spclust/metrics.hpp"
#include "spclust/seed.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

namespace spclust {

void SweepGrid::validate() const {
    if (reps < 0)
        throw std::invalid_argument("sweep: reps must be >= 0");
    for (int k : swap_pairs)
        if (k < 0 || k > base.n_per_component)
            throw std::invalid_argument("sweep: swap pairs must lie in [0, n_per_component]");
    for (double d : deltas)
        if (!std::isfinite(d))
            throw std::invalid_argument("sweep: delta must be finite");
    fit.validate();
    path.validate();
}

SimDesign replicate_design(const SweepGrid& grid, std::size_t delta_index, std::size_t swap_index,
                           int rep) {
    SimDesign d = grid.base;
    d.set_delta(grid.deltas.at(delta_index));
    d.n_swap_pairs = grid.swap_pairs.at(swap_index);
    d.seed = derive_seed(grid.seed, {delta_index, swap_index, static_cast<std::uint64_t>(rep), 0});
    return d;
}

std::vector<SweepRow> run_replicate(const SweepGrid& grid, std::size_t delta_index,
                                    std::size_t swap_index, int rep) {
    const SimDesign design = replicate_design(grid, delta_index, swap_index, rep);
    const auto sim = simulate_replicate(design);
    const Partition components(sim.layout.component, 2);

    FitConfig cfg = grid.fit;
    cfg.seed = derive_seed(grid.seed, {delta_index, swap_index, static_cast<std::uint64_t>(rep), 1});
    PathConfig path = grid.path;
    if (design.Q < path.q_min || design.Q > path.q_max)
        throw std::invalid_argument("sweep: the q range must contain the design's group count");
    PathConfig flat = path;
    flat.lambda_grid = {0.0};

    std::vector<SweepRow> rows;
    for (bool penalized : {false, true}) {
        const auto sel = select_model(sim.Y, sim.layout.X, EmissionKind::Gaussian, cfg,
                                      penalized ? path : flat);
        const FitResult& fixed = *sel.fit_for(design.Q);
        const FitResult& chosen = sel.selected();
        SweepRow r;
        r.delta = design.delta();
        r.swap_pairs = design.n_swap_pairs;
        r.rep = rep;
        r.penalized = penalized;
        r.discordance = spatial_discordance(sim.truth, sim.layout.X);
        r.ari_x = adjusted_rand(fixed.partition, components);
        r.ari_y = adjusted_rand(fixed.partition, sim.truth);
        r.q_selected = chosen.Q;
        r.ari_x_selected = adjusted_rand(chosen.partition, components);
        r.ari_y_selected = adjusted_rand(chosen.partition, sim.truth);
        r.lambda_max = fixed.lambda;
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid) {
    grid.validate();
    struct Job {
        std::size_t d, s;
        int rep;
    };
    std::vector<Job> jobs;
    for (std::size_t d = 0; d < grid.deltas.size(); ++d)
        for (std::size_t s = 0; s < grid.swap_pairs.size(); ++s)
            for (int r = 0; r < grid.reps; ++r)
                jobs.push_back({d, s, r});

    std::vector<std::vector<SweepRow>> out(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(jobs.size()); ++k) {
        const auto& j = jobs[static_cast<std::size_t>(k)];
        try {
            out[static_cast<std::size_t>(k)] = run_replicate(grid, j.d, j.s, j.rep);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<SweepRow> rows;
    rows.reserve(2 * jobs.size());
    for (auto& v : out)
        rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

std::string sweep_csv_header() {
    return "delta,swap_pairs,rep,penalized,discordance,aRI_X,aRI_Y,Q_selected,aRI_X_selected,"
           "aRI_Y_selected,lambda_max";
}

std::string sweep_csv_line(const SweepRow& r) {
    using io::format_double;
    return format_double(r.delta) + "," + std::to_string(r.swap_pairs) + "," +
           std::to_string(r.rep) + "," + (r.penalized ? "1" : "0") + "," +
           format_double(r.discordance) + "," + format_double(r.ari_x) + "," +
           format_double(r.ari_y) + "," + std::to_string(r.q_selected) + "," +
           format_double(r.ari_x_selected) + "," + format_double(r.ari_y_selected) + "," +
           format_double(r.lambda_max);
}

} // namespace spclust
