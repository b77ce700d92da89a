// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exits nonzero if any criterion fails.

#include "spclust/geo.hpp"
#include "spclust/graph.hpp"
#include "spclust/io.hpp"
#include "spclust/kernels.hpp"
#include "spclust/log.hpp"
#include "spclust/metrics.hpp"
#include "spclust/model_selection.hpp"
#include "spclust/simulation.hpp"
#include "spclust/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace spclust;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

void note(const std::string& s) {
    std::printf("    %s\n", s.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<std::string> ids(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back("v" + std::to_string(i));
    return v;
}

// ---- simulation cells -------------------------------------------------------

struct CellSummary {
    double discordance = 0.0;
    double ari_x[2] = {0, 0};  // [unpenalized, penalized], fit with Q = 2
    double ari_y[2] = {0, 0};
    std::map<int, int> q_counts[2];
    int reps = 0;
    double seconds = 0.0;
};

SweepGrid paper_grid(double delta, int swap_pairs, int reps) {
    SweepGrid g;
    g.deltas = {delta};
    g.swap_pairs = {swap_pairs};
    g.reps = reps;
    g.base.n_per_component = 50;
    g.base.sigma = 0.2;
    g.base.nu = 0.0;
    g.path.q_min = 1;
    g.path.q_max = 3;
    g.seed = 2024;
    return g;
}

CellSummary run_cell(double delta, int swap_pairs, int reps = 20) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = run_sweep(paper_grid(delta, swap_pairs, reps));
    CellSummary s;
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    s.reps = reps;
    for (const auto& r : rows) {
        const int p = r.penalized ? 1 : 0;
        s.ari_x[p] += r.ari_x / reps;
        s.ari_y[p] += r.ari_y / reps;
        s.q_counts[p][r.q_selected]++;
        if (p == 0)
            s.discordance += r.discordance / reps;
    }
    return s;
}

int modal_q(const std::map<int, int>& counts) {
    int best = 0, n = -1;
    for (auto [q, c] : counts)
        if (c > n) {
            best = q;
            n = c;
        }
    return best;
}

std::string q_hist(const std::map<int, int>& counts) {
    std::string s;
    for (auto [q, c] : counts)
        s += (s.empty() ? "" : " ") + fmt("Q%d:%d", q, c);
    return s;
}

void describe(const CellSummary& c) {
    note(fmt("discordance %.3f, %d replicates, %.1f s", c.discordance, c.reps, c.seconds));
    note(fmt("unpenalized aRI_X %.3f aRI_Y %.3f  selected {%s}", c.ari_x[0], c.ari_y[0],
             q_hist(c.q_counts[0]).c_str()));
    note(fmt("penalized   aRI_X %.3f aRI_Y %.3f  selected {%s}", c.ari_x[1], c.ari_y[1],
             q_hist(c.q_counts[1]).c_str()));
}

void criterion_1() {
    const auto c = run_cell(1.0, 0);
    const bool ok = std::min({c.ari_x[0], c.ari_x[1], c.ari_y[0], c.ari_y[1]}) >= 0.95 &&
                    c.seconds < 120.0;
    report(ok, "criterion 1 (perfect recovery, delta=1, discordance 0)",
           fmt("min mean aRI %.3f (>= 0.95), %.1f s (< 120 s)",
               std::min({c.ari_x[0], c.ari_x[1], c.ari_y[0], c.ari_y[1]}), c.seconds));
    describe(c);
}

void criterion_2() {
    // 17 of 50 swap pairs puts the expected edge discordance near 0.45.
    const auto c = run_cell(0.5, 17);
    const bool in_band = c.discordance >= 0.40 && c.discordance <= 0.50;
    const bool ok = in_band && c.ari_x[1] >= 0.85 && c.ari_y[1] < c.ari_y[0];
    report(ok, "criterion 2 (penalty trade-off, delta=0.5, discordance 40-50%)",
           fmt("discordance %.3f in [0.40,0.50]: %s; penalized aRI_X %.3f (>= 0.85); "
               "aRI_Y penalized %.3f < unpenalized %.3f",
               c.discordance, in_band ? "yes" : "no", c.ari_x[1], c.ari_y[1], c.ari_y[0]));
    describe(c);
}

void criterion_3() {
    const auto c = run_cell(0.25, 0);
    const bool ok = c.ari_x[1] >= 0.7 && c.ari_y[0] <= 0.45;
    report(ok, "criterion 3 (weak-signal rescue, delta=0.25, discordance 0)",
           fmt("penalized aRI_X %.3f (>= 0.7); unpenalized aRI_Y %.3f (<= 0.45)", c.ari_x[1],
               c.ari_y[0]));
    describe(c);
}

void criterion_4() {
    // Swapping k of 50 label pairs gives expected discordance about 2p(1-p)
    // with p = k/50, so 25 pairs is the most discordant cell this design has.
    const auto c = run_cell(0.25, 25);
    const bool precondition = c.discordance >= 0.80;
    const int modal = modal_q(c.q_counts[1]);
    report(precondition && modal == 1, "criterion 4 (Q collapse, delta=0.25, discordance >= 80%)",
           fmt("discordance %.3f (needs >= 0.80: %s); penalized modal Q %d (== 1)", c.discordance,
               precondition ? "met" : "not attainable with pairwise swaps", modal));
    describe(c);
}

// ---- criterion 5 --------------------------------------------------------------

struct HydroResult {
    ModelSelection pen, free;
    double within_pen = 0.0, within_free = 0.0;
};

HydroResult fit_hydro(const InteractionNetwork& Y, const StructuralNetwork& X, int q_max) {
    FitConfig cfg;
    cfg.seed = 7;
    PathConfig path;
    path.q_min = 1;
    path.q_max = q_max;
    PathConfig flat = path;
    flat.lambda_grid = {0.0};
    HydroResult r{select_model(Y, X, EmissionKind::OneInflatedGaussian, cfg, path),
                  select_model(Y, X, EmissionKind::OneInflatedGaussian, cfg, flat)};
    r.within_pen = mean_within_group(Y, r.pen.selected().partition);
    r.within_free = mean_within_group(Y, r.free.selected().partition);
    return r;
}

void criterion_5_real(const char* occ, const char* coords) {
    const auto table = io::read_occurrence_tables(occ, coords);
    const auto Y = jaccard_network(table);
    const auto X = build_structural(table.sites, 3600.0);
    const auto r = fit_hydro(Y, X, 8);
    const int q = r.pen.selected().Q;
    // Y holds distances; the reported index may be either orientation.
    const bool dist_ok = std::abs(r.within_pen - 0.944) <= 0.02 && std::abs(r.within_free - 0.928) <= 0.02;
    const bool sim_ok = std::abs(1.0 - r.within_pen - 0.944) <= 0.02 &&
                        std::abs(1.0 - r.within_free - 0.928) <= 0.02;
    report(q == 6 && (dist_ok || sim_ok), "criterion 5 (hydrothermal data)",
           fmt("%zu sites; penalized Q %d (== 6); within-group distance %.3f / %.3f, "
               "similarity %.3f / %.3f (targets 0.944 / 0.928 +- 0.02; matches: %s)",
               table.sites.size(), q, r.within_pen, r.within_free, 1.0 - r.within_pen,
               1.0 - r.within_free, dist_ok ? "distance" : sim_ok ? "similarity" : "neither"));
}

// 63 sites in six regional clusters with regional taxon pools.
OccurrenceTable surrogate_table(std::uint64_t seed, std::vector<int>& region) {
    std::mt19937_64 rng(seed);
    const LatLon centres[6] = {{40, -30}, {20, -110}, {-20, -115}, {45, -130}, {-15, 170}, {-30, 65}};
    const int sizes[6] = {14, 12, 11, 10, 10, 6};
    const int n_taxa = 150, pool = 25;
    std::normal_distribution<double> jitter(0.0, 3.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    OccurrenceTable t;
    for (int k = 0; k < n_taxa; ++k)
        t.taxa.push_back("g" + std::to_string(k));
    for (int r = 0; r < 6; ++r)
        for (int s = 0; s < sizes[r]; ++s) {
            t.sites.push_back({fmt("r%d_s%02d", r, s),
                               {std::clamp(centres[r].lat + jitter(rng), -89.0, 89.0),
                                centres[r].lon + jitter(rng)}});
            region.push_back(r);
            std::vector<unsigned char> row(n_taxa, 0);
            for (int k = 0; k < n_taxa; ++k) {
                const bool local = k >= r * pool && k < (r + 1) * pool;
                row[k] = u(rng) < (local ? 0.45 : 0.01);
            }
            row[r * pool] = 1;  // never empty
            t.presence.push_back(std::move(row));
        }
    return t;
}

bool fits_are_valid(const ModelSelection& sel, std::string& why) {
    for (const auto& p : sel.paths)
        for (const auto& f : p.fits) {
            const auto& tau = f.tau.matrix();
            for (std::size_t i = 0; i < tau.rows(); ++i) {
                double s = 0.0;
                for (double v : tau.row(i))
                    s += v;
                if (std::abs(s - 1.0) > 1e-10) {
                    why = "tau row not stochastic";
                    return false;
                }
            }
            for (const auto& t : f.trace)
                if (t.bound_after_estep < t.bound_before_estep - 1e-6 * std::max(1.0, std::abs(t.bound_before_estep))) {
                    why = "E-step lowered the bound";
                    return false;
                }
            const auto& fam = f.params.family;
            for (std::size_t q = 0; q < fam.inflation.rows(); ++q)
                for (std::size_t l = 0; l < fam.inflation.cols(); ++l)
                    if (!(fam.inflation(q, l) >= 0.0 && fam.inflation(q, l) <= 1.0) ||
                        !std::isfinite(fam.location(q, l))) {
                        why = "emission parameter out of range";
                        return false;
                    }
            if (!(fam.sigma2 > 0.0) || !std::isfinite(f.objective) || !std::isfinite(f.icl)) {
                why = "non-finite objective, ICL or variance";
                return false;
            }
        }
    return true;
}

void criterion_5_surrogate() {
    std::vector<int> region;
    const auto table = surrogate_table(63, region);
    set_warnings_enabled(false);  // identical taxon sets give Jaccard 0, clamped
    const auto Y = jaccard_network(table);
    const auto X = build_structural(table.sites, 3600.0);
    const auto a = fit_hydro(Y, X, 7);
    const auto b = fit_hydro(Y, X, 7);
    set_warnings_enabled(true);

    std::size_t ones = 0;
    bool range_ok = true;
    for (std::size_t i = 0; i < Y.size(); ++i)
        for (std::size_t j = i + 1; j < Y.size(); ++j) {
            ones += Y(i, j) == 1.0;
            range_ok = range_ok && Y(i, j) >= 0.0 && Y(i, j) <= 1.0;
        }
    std::string why = "ok";
    const bool valid = fits_are_valid(a.pen, why) && fits_are_valid(a.free, why);
    const bool deterministic = a.pen.selected().partition == b.pen.selected().partition &&
                               a.free.selected().partition == b.free.selected().partition &&
                               a.pen.selected().objective == b.pen.selected().objective;
    const auto G = group_distance_matrix(Y, a.pen.selected().partition);
    const bool heat_ok = G.rows() == static_cast<std::size_t>(a.pen.selected().Q);
    const bool ok = range_ok && ones > 0 && valid && deterministic && heat_ok;
    report(ok, "criterion 5 (hydrothermal dataset not bundled; 63-node inflated-Gaussian surrogate)",
           fmt("Y in [0,1] with %zu exact ones; fits valid: %s; deterministic: %s; heatmap %zux%zu",
               ones, why.c_str(), deterministic ? "yes" : "no", G.rows(), G.cols()));
    const Partition regions(region, 6);
    note(fmt("%zu structural edges; penalized Q %d (aRI vs regions %.3f, within %.3f); "
             "unpenalized Q %d (aRI %.3f, within %.3f)",
             X.edges().size(), a.pen.selected().Q,
             adjusted_rand(a.pen.selected().partition, regions), a.within_pen,
             a.free.selected().Q, adjusted_rand(a.free.selected().partition, regions),
             a.within_free));
    note("set SPCLUST_HYDRO_OCC and SPCLUST_HYDRO_COORDS to run on the real 63-field data");
}

// ---- criterion 6 --------------------------------------------------------------

double gauss_logpdf(double y, double mu, double s2) {
    return -0.5 * std::log(2.0 * std::numbers::pi * s2) - (y - mu) * (y - mu) / (2.0 * s2);
}

// Unpenalized mean-field map: tau_iq prop. to alpha_q prod f(Y_ij; mu_ql)^tau_jl.
Matrix mixnet_map(const Matrix& Y, const ModelParams& p, const Matrix& tau) {
    const std::size_t n = tau.rows(), Q = tau.cols();
    Matrix out(n, Q);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> lg(Q);
        for (std::size_t q = 0; q < Q; ++q) {
            lg[q] = std::log(p.alpha[q]);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    for (std::size_t l = 0; l < Q; ++l)
                        lg[q] += tau(j, l) * gauss_logpdf(Y(i, j), p.family.location(q, l), p.family.sigma2);
        }
        const double m = *std::max_element(lg.begin(), lg.end());
        double z = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            z += out(i, q) = std::exp(lg[q] - m);
        for (std::size_t q = 0; q < Q; ++q)
            out(i, q) /= z;
    }
    return out;
}

Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = m(j, i) = u(rng);
    return m;
}

Matrix random_tau(std::size_t n, std::size_t Q, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Matrix t(n, Q);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            s += t(i, q) = u(rng);
        for (std::size_t q = 0; q < Q; ++q)
            t(i, q) /= s;
    }
    return t;
}

StructuralNetwork random_structure(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution keep(p);
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (keep(rng))
                e.push_back({i, j, 1.0});
    return StructuralNetwork(ids(n), std::move(e));
}

bool prop_mixnet(std::string& detail) {
    std::mt19937_64 rng(601);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FitConfig cfg;
    cfg.fp_tol = 1e-13;
    cfg.max_fixed_point_iters = 20000;
    double worst = 0.0;
    int unconverged = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 3 + rng() % 13, Q = 1 + rng() % 3;
        const InteractionNetwork Y(ids(n), random_symmetric(n, rng));
        const auto X = empty_structure(Y);
        ModelParams p;
        p.family.location = Matrix(Q, Q);
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t l = q; l < Q; ++l)
                p.family.location(q, l) = p.family.location(l, q) = u(rng);
        p.family.sigma2 = 0.4 + 0.3 * (u(rng) + 1.0);
        double s = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            s += p.alpha.emplace_back(1.5 + u(rng));
        for (auto& a : p.alpha)
            a /= s;
        VemEngine engine(Y, X, EmissionKind::Gaussian, cfg);
        const auto res = engine.e_step(p, random_tau(n, Q, rng), 0.0);
        unconverged += !res.converged;
        worst = std::max(worst, max_abs_diff(mixnet_map(Y.values(), p, res.tau.matrix()), res.tau.matrix()));
    }
    detail = fmt("max |T(tau) - tau| = %.2e over 100 cases (%d hit the sweep cap)", worst, unconverged);
    return worst <= 1e-8;
}

bool prop_trace(std::string& detail) {
    std::mt19937_64 rng(602);
    double worst = 0.0;
    std::size_t iterations = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 6 + rng() % 15;
        const InteractionNetwork Y(ids(n), random_symmetric(n, rng));
        const auto X = random_structure(n, 0.3, rng);
        FitConfig cfg;
        cfg.seed = rng();
        cfg.n_restarts = 1;
        const int Q = 1 + static_cast<int>(rng() % 3);
        const auto fit = run_vem(Y, X, Q, 0.25 * static_cast<double>(rng() % 12), EmissionKind::Gaussian, cfg);
        for (const auto& t : fit.trace) {
            worst = std::max(worst, t.bound_before_estep - t.bound_after_estep);
            ++iterations;
        }
    }
    detail = fmt("largest drop %.2e over %zu EM iterations of 500 fits", worst, iterations);
    return worst <= 1e-6;
}

// All set partitions of n items as restricted growth strings.
std::vector<std::vector<int>> set_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(n, 0);
    auto rec = [&](auto&& self, int i, int m) -> void {
        if (i == n) {
            out.push_back(a);
            return;
        }
        for (int v = 0; v <= m + 1; ++v) {
            a[i] = v;
            self(self, i + 1, std::max(m, v));
        }
    };
    if (n > 0) {
        a[0] = 0;
        rec(rec, 1, 0);
    }
    return out;
}

double ari_oracle(const std::vector<int>& a, const std::vector<int>& b) {
    double both = 0, na = 0, nb = 0, pairs = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            both += sa && sb;
            na += sa;
            nb += sb;
            ++pairs;
        }
    const double expected = na * nb / pairs, top = 0.5 * (na + nb);
    return top == expected ? 1.0 : (both - expected) / (top - expected);
}

bool prop_ari(std::string& detail) {
    double worst = 0.0;
    std::size_t compared = 0;
    for (int n = 2; n <= 8; ++n) {
        const auto parts = set_partitions(n);
        const auto m = static_cast<std::ptrdiff_t>(parts.size());
#pragma omp parallel for schedule(dynamic) reduction(max : worst) reduction(+ : compared)
        for (std::ptrdiff_t i = 0; i < m; ++i)
            for (std::ptrdiff_t j = 0; j < m; ++j) {
                const auto& a = parts[static_cast<std::size_t>(i)];
                const auto& b = parts[static_cast<std::size_t>(j)];
                worst = std::max(worst, std::abs(adjusted_rand(a, b) - ari_oracle(a, b)));
                ++compared;
            }
    }
    detail = fmt("max |ARI - pair-count oracle| = %.2e over all %zu partition pairs, n = 2..8", worst,
                 compared);
    return worst <= 1e-12;
}

bool prop_gabriel(std::string& detail) {
    std::mt19937_64 rng(604);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int mismatches = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng() % 49;
        std::vector<Point> pts(n);
        for (auto& p : pts)
            p = {u(rng), u(rng)};
        std::set<std::pair<std::size_t, std::size_t>> want, got;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double mx = 0.5 * (pts[i].x + pts[j].x), my = 0.5 * (pts[i].y + pts[j].y);
                const double r2 = 0.25 * (std::pow(pts[i].x - pts[j].x, 2) + std::pow(pts[i].y - pts[j].y, 2));
                bool empty = true;
                for (std::size_t k = 0; k < n && empty; ++k)
                    if (k != i && k != j)
                        empty = std::pow(pts[k].x - mx, 2) + std::pow(pts[k].y - my, 2) > r2;
                if (empty)
                    want.insert({i, j});
            }
        const auto g = gabriel_graph(pts);
        for (const auto& e : g.edges())
            got.insert({e.i, e.j});
        mismatches += want != got;
    }
    detail = fmt("%d of 50 random point sets differ from the disc-test oracle", mismatches);
    return mismatches == 0;
}

bool prop_penalty(std::string& detail) {
    std::mt19937_64 rng(605);
    int bad = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng() % 40;
        const int Q = 1 + static_cast<int>(rng() % 4);
        const auto X = random_structure(n, 0.2, rng);
        std::vector<int> z(n);
        for (auto& v : z)
            v = static_cast<int>(rng() % static_cast<unsigned>(Q));
        int disc = 0;
        for (const auto& e : X.edges())
            disc += z[e.i] != z[e.j];
        bad += penalty(Partition(z, Q), X) != 2.0 * disc;
    }
    detail = fmt("%d of 100 random (Z, X) disagree with 2 x discordant edges", bad);
    return bad == 0;
}

bool prop_sweep(std::string& detail) {
    SweepGrid g = paper_grid(0.5, 0, 3);
    g.deltas = {1.0, 0.5, 0.25};
    g.swap_pairs = {0, 5, 10};
    g.base.n_per_component = 20;
    g.seed = 606;

    // Row-stochastic tau in every fit of every replicate.
    std::size_t fits = 0;
    bool stochastic = true;
    for (std::size_t d = 0; d < g.deltas.size(); ++d)
        for (std::size_t s = 0; s < g.swap_pairs.size(); ++s)
            for (int r = 0; r < g.reps; ++r) {
                const auto sim = simulate_replicate(replicate_design(g, d, s, r));
                const auto sel = select_model(sim.Y, sim.layout.X, EmissionKind::Gaussian, g.fit, g.path);
                for (const auto& p : sel.paths)
                    for (const auto& f : p.fits) {
                        ++fits;
                        const auto& tau = f.tau.matrix();
                        for (std::size_t i = 0; i < tau.rows(); ++i) {
                            double sum = 0.0;
                            for (double v : tau.row(i)) {
                                stochastic = stochastic && v >= 0.0 && v <= 1.0;
                                sum += v;
                            }
                            stochastic = stochastic && std::abs(sum - 1.0) <= 1e-10;
                        }
                    }
            }

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = run_sweep(g);
    omp_set_num_threads(std::max(2, saved));
    const auto again = run_sweep(g);
    const auto third = run_sweep(g);
    omp_set_num_threads(saved);
    bool same = one.size() == again.size() && again.size() == third.size();
    for (std::size_t k = 0; same && k < one.size(); ++k)
        same = sweep_csv_line(one[k]) == sweep_csv_line(again[k]) &&
               sweep_csv_line(again[k]) == sweep_csv_line(third[k]);
    detail = fmt("tau row-stochastic in %zu fits: %s; %zu sweep rows identical across 3 runs "
                 "(1 and %d threads): %s",
                 fits, stochastic ? "yes" : "no", one.size(), std::max(2, saved), same ? "yes" : "no");
    return stochastic && same;
}

void criterion_6() {
    struct Prop {
        const char* name;
        bool (*fn)(std::string&);
    };
    const Prop props[] = {{"lambda=0 E-step vs independent mean-field map", prop_mixnet},
                          {"E-step bound non-decreasing", prop_trace},
                          {"adjusted Rand vs pair counting", prop_ari},
                          {"Gabriel graph vs disc oracle", prop_gabriel},
                          {"penalty of hard labels", prop_penalty},
                          {"sweep stochasticity and determinism", prop_sweep}};
    bool all = true;
    std::vector<std::string> lines;
    for (const auto& p : props) {
        std::string d;
        const bool ok = p.fn(d);
        all = all && ok;
        lines.push_back(fmt("[%s] %s: %s", ok ? "ok" : "FAILED", p.name, d.c_str()));
    }
    report(all, "criterion 6 (property suite)", all ? "all properties hold" : "see failed properties");
    for (const auto& l : lines)
        note(l);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    const char* occ = std::getenv("SPCLUST_HYDRO_OCC");
    const char* coords = std::getenv("SPCLUST_HYDRO_COORDS");
    if (occ && coords)
        criterion_5_real(occ, coords);
    else
        criterion_5_surrogate();
    criterion_6();
    std::printf("%d criterion/criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
