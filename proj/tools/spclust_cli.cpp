// spclust command line: simulate | ingest | cluster | sweep | metrics.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 non-convergence (outputs are
// still written).
//
// Every subcommand accepts --config <json>. Keys are the long flag names
// without dashes ("swap-pairs", "q-max", ...). A flag given on the command
// line wins over the file, the file wins over the defaults, and the merged
// settings are written to config.json in each output directory.

#include "spclust/geo.hpp"
#include "spclust/io.hpp"
#include "spclust/log.hpp"
#include "spclust/metrics.hpp"
#include "spclust/model_selection.hpp"
#include "spclust/seed.hpp"
#include "spclust/simulation.hpp"
#include "spclust/sweep.hpp"
#include "spclust/vem.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spclust;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNoConvergence = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Options bound to plain variables, plus what is needed to fill them from a
// JSON config and echo them back.
class Settings {
public:
    explicit Settings(CLI::App* app) : app_(app) {
        app_->add_option("--config", config_path_, "JSON file with default flag values");
    }

    template <class T>
    CLI::Option* add(const std::string& name, T& var, const std::string& help) {
        auto* opt = app_->add_option("--" + name, var, help);
        opt->capture_default_str();
        entries_.push_back({name, opt, [&var](const json& j) { var = j.get<T>(); },
                            [&var] { return json(var); }});
        return opt;
    }

    CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
        auto* opt = app_->add_flag("--" + name, var, help);
        entries_.push_back({name, opt, [&var](const json& j) { var = j.get<bool>(); },
                            [&var] { return json(var); }});
        return opt;
    }

    /// Applies config-file values to every option not given on the command
    /// line.
    void resolve() {
        if (config_path_.empty())
            return;
        const json cfg = io::read_json(config_path_);
        if (!cfg.is_object())
            throw UsageError(config_path_ + ": config must be a JSON object");
        for (auto it = cfg.begin(); it != cfg.end(); ++it) {
            auto e = std::find_if(entries_.begin(), entries_.end(),
                                  [&](const Entry& x) { return x.name == it.key(); });
            if (e == entries_.end())
                throw UsageError(config_path_ + ": unknown key '" + it.key() + "'");
            if (e->opt->count() > 0)
                continue;
            try {
                e->load(it.value());
            } catch (const json::exception&) {
                throw UsageError(config_path_ + ": wrong type for '" + it.key() + "'");
            }
        }
    }

    json effective() const {
        json j = json::object();
        for (const auto& e : entries_)
            j[e.name] = e.dump();
        return j;
    }

private:
    struct Entry {
        std::string name;
        CLI::Option* opt;
        std::function<void(const json&)> load;
        std::function<json()> dump;
    };
    CLI::App* app_;
    std::string config_path_;
    std::vector<Entry> entries_;
};

void echo_config(const fs::path& dir, const std::string& command, const Settings& s) {
    json j = s.effective();
    j["command"] = command;
    io::write_text(dir / "config.json", j.dump(2) + "\n");
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());
}

// Comma-separated list; an empty string gives an empty list.
template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
    std::vector<T> out;
    if (text.empty())
        return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        T v;
        if (!(is >> v) || !(is >> std::ws).eof())
            throw UsageError("--" + flag + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

SweepOrder parse_sweep_order(const std::string& s) {
    if (s == "sequential")
        return SweepOrder::Sequential;
    if (s == "jacobi")
        return SweepOrder::Jacobi;
    throw UsageError("--estep must be sequential or jacobi");
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    int n_per = 50;
    double sigma = 0.2;
    double delta = 1.0;
    double nu = 0.0;
    int swap_pairs = 0;
    int reps = 1;
    std::uint64_t seed = 1;
    bool distance_weights = false;
    std::string out;
};

void setup_simulate(SimulateArgs& a, Settings& s) {
    s.add("n-per", a.n_per, "nodes per spatial component");
    s.add("sigma", a.sigma, "interaction standard deviation");
    s.add("delta", a.delta, "separability (mu - nu) / sigma");
    s.add("nu", a.nu, "between-group mean");
    s.add("swap-pairs", a.swap_pairs, "label pairs swapped across components");
    s.add("reps", a.reps, "number of replicates");
    s.add("seed", a.seed, "base seed");
    s.flag("distance-weights", a.distance_weights, "weight Gabriel edges by max(d) - d");
    s.add("out", a.out, "output directory");
}

int run_simulate(const SimulateArgs& a, const Settings& s) {
    if (a.out.empty())
        throw UsageError("simulate: --out is required");
    if (a.reps < 0)
        throw UsageError("simulate: --reps must be >= 0");
    SimDesign d;
    d.n_per_component = a.n_per;
    d.sigma = a.sigma;
    d.nu = a.nu;
    d.set_delta(a.delta);
    d.n_swap_pairs = a.swap_pairs;
    d.distance_weights = a.distance_weights;
    try {
        d.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("simulate: ") + e.what());
    }
    const fs::path root(a.out);
    make_dir(root);
    echo_config(root, "simulate", s);
    for (int r = 0; r < a.reps; ++r) {
        d.seed = derive_seed(a.seed, {static_cast<std::uint64_t>(r)});
        const auto sim = simulate_replicate(d);
        char name[32];
        std::snprintf(name, sizeof name, "rep_%03d", r);
        const fs::path dir = root / name;
        make_dir(dir);
        const auto& ids = sim.Y.node_ids();
        io::write_interaction_csv(dir / "Y.csv", sim.Y);
        io::write_structural_csv(dir / "X.csv", sim.layout.X);
        io::write_truth_csv(dir / "truth.csv", ids, sim.truth, sim.layout.component);
        json dj = io::to_json(d);
        dj["discordance"] = spatial_discordance(sim.truth, sim.layout.X);
        io::write_text(dir / "design.json", dj.dump(2) + "\n");
        echo_config(dir, "simulate", s);
    }
    return kOk;
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
    std::string occurrences, coords, out;
    double threshold_km = 3600.0;
    bool global_max = false;
};

void setup_ingest(IngestArgs& a, Settings& s) {
    s.add("occurrences", a.occurrences, "sites x taxa presence CSV");
    s.add("coords", a.coords, "site_id,lat,lon CSV");
    s.add("threshold-km", a.threshold_km, "largest great-circle distance kept as an edge");
    s.flag("global-max", a.global_max, "weight edges by the max over all pairs, not kept edges");
    s.add("out", a.out, "output directory");
}

int run_ingest(const IngestArgs& a, const Settings& s) {
    if (a.occurrences.empty() || a.coords.empty() || a.out.empty())
        throw UsageError("ingest: --occurrences, --coords and --out are required");
    if (!(a.threshold_km > 0.0))
        throw UsageError("ingest: --threshold-km must be positive");
    const auto table = io::read_occurrence_tables(a.occurrences, a.coords);
    const auto Y = jaccard_network(table);
    const auto X = build_structural(table.sites, a.threshold_km,
                                    a.global_max ? WeightReference::GlobalMax
                                                 : WeightReference::RetainedMax);
    const fs::path dir(a.out);
    make_dir(dir);
    io::write_interaction_csv(dir / "Y.csv", Y);
    io::write_structural_csv(dir / "X.csv", X);
    echo_config(dir, "ingest", s);
    return kOk;
}

// ---- cluster --------------------------------------------------------------

struct FitArgs {
    int q_min = 1;
    int q_max = 4;
    std::uint64_t seed = 1;
    int restarts = 4;
    int max_em_iters = 100;
    int max_fp_iters = 200;
    std::string estep = "sequential";
    double lambda0 = 0.0;
    int grid_k = 12;
    int window = 2;
};

void add_fit_options(FitArgs& a, Settings& s) {
    s.add("q-min", a.q_min, "smallest number of groups");
    s.add("q-max", a.q_max, "largest number of groups");
    s.add("seed", a.seed, "seed for k-means restarts");
    s.add("restarts", a.restarts, "k-means restarts per fit");
    s.add("max-em-iters", a.max_em_iters, "EM iteration cap");
    s.add("max-fp-iters", a.max_fp_iters, "fixed-point sweep cap per E-step");
    s.add("estep", a.estep, "E-step sweep order: sequential | jacobi");
    s.add("lambda0", a.lambda0, "first nonzero lambda of the path (<= 0: data-driven)");
    s.add("grid-k", a.grid_k, "path grid is lambda0 * 2^k, k = 0..grid-k");
    s.add("window", a.window, "path stops after this many equal partitions");
}

FitConfig fit_config(const FitArgs& a) {
    FitConfig c;
    c.seed = a.seed;
    c.n_restarts = a.restarts;
    c.max_em_iters = a.max_em_iters;
    c.max_fixed_point_iters = a.max_fp_iters;
    c.sweep = parse_sweep_order(a.estep);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

PathConfig path_config(const FitArgs& a) {
    PathConfig p;
    p.q_min = a.q_min;
    p.q_max = a.q_max;
    p.lambda0 = a.lambda0;
    p.K = a.grid_k;
    p.stability_window = a.window;
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return p;
}

struct ClusterArgs {
    std::string y, x, out;
    std::string lambda = "auto";
    std::string family = "gaussian";
    bool no_tau = false;
    FitArgs fit;
};

void setup_cluster(ClusterArgs& a, Settings& s) {
    s.add("y", a.y, "interaction matrix CSV");
    s.add("x", a.x, "structural edge CSV (src,dst,weight)");
    s.add("lambda", a.lambda, "auto (lambda path) or a fixed value");
    s.add("family", a.family, "gaussian | bernoulli | poisson | inflated-gaussian");
    s.flag("no-tau", a.no_tau, "omit tau from fit.json");
    s.add("out", a.out, "output directory");
    add_fit_options(a.fit, s);
}

std::string path_report(const ModelSelection& sel) {
    std::string csv = "Q,lambda,objective,icl,n_groups_nonempty,penalty_of_hard_labels\n";
    for (const auto& p : sel.paths)
        for (const auto& f : p.fits)
            csv += std::to_string(f.Q) + "," + io::format_double(f.lambda) + "," +
                   io::format_double(f.objective) + "," + io::format_double(f.icl) + "," +
                   std::to_string(f.partition.n_nonempty()) + "," +
                   io::format_double(f.penalty_of_hard_labels) + "\n";
    return csv;
}

int run_cluster(const ClusterArgs& a, const Settings& s) {
    if (a.y.empty() || a.out.empty())
        throw UsageError("cluster: --y and --out are required");
    EmissionKind kind;
    try {
        kind = parse_emission_kind(a.family);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("cluster: ") + e.what());
    }
    std::optional<double> fixed_lambda;
    if (a.lambda != "auto") {
        try {
            std::size_t used = 0;
            fixed_lambda = std::stod(a.lambda, &used);
            if (used != a.lambda.size())
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError("cluster: --lambda must be 'auto' or a number");
        }
        if (!(*fixed_lambda >= 0.0))
            throw UsageError("cluster: --lambda must be >= 0");
    }
    if (a.x.empty() && (!fixed_lambda || *fixed_lambda > 0.0))
        throw UsageError("cluster: a structural network (--x) is required unless --lambda 0");

    const FitConfig cfg = fit_config(a.fit);
    PathConfig path = path_config(a.fit);
    if (fixed_lambda && *fixed_lambda == 0.0)
        path.lambda_grid = {0.0};

    const auto Y = io::read_interaction_csv(a.y);
    const auto X = a.x.empty() ? empty_structure(Y) : io::read_structural_csv(a.x, Y.node_ids());
    if (path.q_max > static_cast<int>(Y.size()))
        throw UsageError("cluster: --q-max exceeds the number of nodes");

    ModelSelection sel;
    if (fixed_lambda && *fixed_lambda > 0.0) {
        // A fixed lambda is fitted from the lambda = 0 solution of each Q,
        // keeping the path's warm start but skipping the stopping rule.
        const VemEngine engine(Y, X, kind, cfg);
        for (int q = path.q_min; q <= path.q_max; ++q) {
            LambdaPath lp;
            auto f0 = engine.fit(q, 0.0);
            f0.icl = icl(f0, Y);
            auto f1 = engine.fit_from(f0.tau.matrix(), *fixed_lambda);
            f1.icl = icl(f1, Y);
            lp.grid = {0.0, *fixed_lambda};
            lp.fits = {std::move(f0), std::move(f1)};
            sel.paths.push_back(std::move(lp));
        }
        for (std::size_t k = 1; k < sel.paths.size(); ++k)
            if (sel.paths[k].at_lambda_max().icl > sel.selected().icl)
                sel.best = k;
    } else {
        sel = select_model(Y, X, kind, cfg, path);
    }

    const FitResult& best = sel.selected();
    const fs::path dir(a.out);
    make_dir(dir);
    const auto& ids = Y.node_ids();
    io::write_text(dir / "fit.json", io::to_json(best, ids, !a.no_tau).dump(2) + "\n");
    io::write_labels_csv(dir / "labels.csv", ids, best.partition);
    io::write_heatmap_csv(dir / "heatmap.csv", group_distance_matrix(Y, best.partition));
    io::write_text(dir / "path.csv", path_report(sel));
    echo_config(dir, "cluster", s);

    std::printf("Q=%d lambda=%s icl=%s converged=%s\n", best.Q, io::format_double(best.lambda).c_str(),
                io::format_double(best.icl).c_str(), best.converged ? "yes" : "no");
    if (!best.converged) {
        std::fprintf(stderr, "spclust: EM did not converge within %d iterations\n",
                     cfg.max_em_iters);
        return kNoConvergence;
    }
    return kOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
    std::string deltas = "1,0.5,0.25";
    std::string swap_pairs = "0,5,10,15,20,25";
    int reps = 50;
    int n_per = 50;
    double sigma = 0.2;
    double nu = 0.0;
    std::string out;
    FitArgs fit;
};

void setup_sweep(SweepArgs& a, Settings& s) {
    s.add("deltas", a.deltas, "comma-separated separabilities");
    s.add("swap-pairs", a.swap_pairs, "comma-separated swap counts");
    s.add("reps", a.reps, "replicates per cell");
    s.add("n-per", a.n_per, "nodes per spatial component");
    s.add("sigma", a.sigma, "interaction standard deviation");
    s.add("nu", a.nu, "between-group mean");
    s.add("out", a.out, "output directory (sweep.csv, config.json)");
    a.fit.q_max = 3;
    add_fit_options(a.fit, s);
}

int run_sweep_cmd(const SweepArgs& a, const Settings& s) {
    if (a.out.empty())
        throw UsageError("sweep: --out is required");
    SweepGrid grid;
    grid.deltas = parse_list<double>(a.deltas, "deltas");
    grid.swap_pairs = parse_list<int>(a.swap_pairs, "swap-pairs");
    grid.reps = a.reps;
    grid.base.n_per_component = a.n_per;
    grid.base.sigma = a.sigma;
    grid.base.nu = a.nu;
    grid.fit = fit_config(a.fit);
    grid.path = path_config(a.fit);
    grid.seed = a.fit.seed;
    try {
        grid.validate();
        grid.base.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("sweep: ") + e.what());
    }
    const auto rows = run_sweep(grid);
    const fs::path dir(a.out);
    make_dir(dir);
    std::string csv = sweep_csv_header() + "\n";
    for (const auto& r : rows)
        csv += sweep_csv_line(r) + "\n";
    io::write_text(dir / "sweep.csv", csv);
    echo_config(dir, "sweep", s);
    return kOk;
}

// ---- metrics --------------------------------------------------------------

struct MetricsArgs {
    std::string labels, against, against_column = "label", y, out;
};

void setup_metrics(MetricsArgs& a, Settings& s) {
    s.add("labels", a.labels, "labels CSV (node,label)");
    s.add("against", a.against, "second labels or truth CSV");
    s.add("against-column", a.against_column, "column of --against to compare (label | component)");
    s.add("y", a.y, "interaction matrix CSV; adds the group distance heatmap");
    s.add("out", a.out, "output directory for heatmap.csv and metrics.json");
}

int run_metrics(const MetricsArgs& a, const Settings& s) {
    if (a.labels.empty())
        throw UsageError("metrics: --labels is required");
    if (a.against.empty() && a.y.empty())
        throw UsageError("metrics: give --against and/or --y");
    if (!a.y.empty() && a.out.empty())
        throw UsageError("metrics: --y needs --out");

    json result = json::object();
    std::vector<std::string> ids;
    std::optional<InteractionNetwork> Y;
    if (!a.y.empty()) {
        Y.emplace(io::read_interaction_csv(a.y));
        ids = Y->node_ids();
    } else {
        ids = io::read_label_ids(a.labels);
    }
    const auto z = io::read_labels_csv(a.labels, ids);
    if (!a.against.empty()) {
        const auto w = io::read_labels_csv(a.against, ids, 0, a.against_column);
        const double ari = adjusted_rand(z, w);
        result["adjusted_rand"] = ari;
        std::printf("adjusted_rand=%s\n", io::format_double(ari).c_str());
    }
    if (Y) {
        const auto heat = group_distance_matrix(*Y, z);
        const double within = mean_within_group(*Y, z);
        result["mean_within_group"] = std::isfinite(within) ? json(within) : json(nullptr);
        std::printf("mean_within_group=%s\n", io::format_double(within).c_str());
        const fs::path dir(a.out);
        make_dir(dir);
        io::write_heatmap_csv(dir / "heatmap.csv", heat);
    }
    if (!a.out.empty()) {
        const fs::path dir(a.out);
        make_dir(dir);
        io::write_text(dir / "metrics.json", result.dump(2) + "\n");
        echo_config(dir, "metrics", s);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatially constrained clustering of interaction networks"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "silence warnings");

    auto* sim_cmd = app.add_subcommand("simulate", "generate two-component replicates");
    auto* ing_cmd = app.add_subcommand("ingest", "build Y and X from occurrences and coordinates");
    auto* clu_cmd = app.add_subcommand("cluster", "fit and select a model");
    auto* swp_cmd = app.add_subcommand("sweep", "simulation grid with and without the penalty");
    auto* met_cmd = app.add_subcommand("metrics", "adjusted Rand index and group distances");

    SimulateArgs sim_args;
    IngestArgs ing_args;
    ClusterArgs clu_args;
    SweepArgs swp_args;
    MetricsArgs met_args;
    Settings sim_s(sim_cmd), ing_s(ing_cmd), clu_s(clu_cmd), swp_s(swp_cmd), met_s(met_cmd);
    setup_simulate(sim_args, sim_s);
    setup_ingest(ing_args, ing_s);
    setup_cluster(clu_args, clu_s);
    setup_sweep(swp_args, swp_s);
    setup_metrics(met_args, met_s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    set_warnings_enabled(!quiet);

    try {
        if (*sim_cmd) {
            sim_s.resolve();
            return run_simulate(sim_args, sim_s);
        }
        if (*ing_cmd) {
            ing_s.resolve();
            return run_ingest(ing_args, ing_s);
        }
        if (*clu_cmd) {
            clu_s.resolve();
            return run_cluster(clu_args, clu_s);
        }
        if (*swp_cmd) {
            swp_s.resolve();
            return run_sweep_cmd(swp_args, swp_s);
        }
        if (*met_cmd) {
            met_s.resolve();
            return run_metrics(met_args, met_s);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "spclust: %s\n", e.what());
        return kUsage;
    } catch (const DataError& e) {
        std::fprintf(stderr, "spclust: data error: %s\n", e.what());
        return kData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "spclust: data error: %s\n", e.what());
        return kData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "spclust: error: %s\n", e.what());
        return kData;
    }
    return kUsage;
}
