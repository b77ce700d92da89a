#include "spclust/simulation.hpp"

#include "spclust/kernels.hpp"
#include "spclust/seed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace spclust {

namespace {

std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "n%03zu", i);
        ids[i] = buf;
    }
    return ids;
}

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

} // namespace

void SimDesign::set_delta(double delta) { mu = nu + delta * sigma; }

void SimDesign::validate() const {
    if (n_per_component < 2)
        throw std::invalid_argument("SimDesign: need at least 2 nodes per component");
    if (Q != 2)
        throw std::invalid_argument("SimDesign: the two-component design uses Q = 2");
    if (alpha_true.size() != static_cast<std::size_t>(Q))
        throw std::invalid_argument("SimDesign: alpha_true must have Q entries");
    if (!(sigma > 0.0))
        throw std::invalid_argument("SimDesign: sigma must be positive");
    if (n_swap_pairs < 0 || n_swap_pairs > n_per_component)
        throw std::invalid_argument("SimDesign: n_swap_pairs must lie in [0, n_per_component]");
}

StructuralNetwork gabriel_graph(const std::vector<Point>& points,
                                std::vector<std::string> node_ids) {
    const std::size_t n = points.size();
    if (n < 2)
        throw std::invalid_argument("gabriel_graph: need at least 2 points");
    if (node_ids.empty())
        node_ids = default_ids(n);
    if (node_ids.size() != n)
        throw std::invalid_argument("gabriel_graph: one id per point required");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].x != points[b].x ? points[a].x < points[b].x : points[a].y < points[b].y;
    });
    for (std::size_t k = 1; k < n; ++k)
        if (points[order[k]].x == points[order[k - 1]].x &&
            points[order[k]].y == points[order[k - 1]].y)
            throw std::invalid_argument("gabriel_graph: duplicate point");

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = points[i].x;
        ys[i] = points[i].y;
    }
    std::vector<Edge> edges;
    for (auto [i, j] : kernels::omp::gabriel_edges(xs, ys))
        edges.push_back({i, j, 1.0});
    return StructuralNetwork(std::move(node_ids), std::move(edges));
}

TwoComponentLayout make_two_component(const SimDesign& design) {
    design.validate();
    const auto m = static_cast<std::size_t>(design.n_per_component);
    std::mt19937_64 rng(derive_seed(design.seed, {1}));
    std::uniform_real_distribution<double> u(0.0, 1.0);

    TwoComponentLayout out{StructuralNetwork({}, {}), {}, {}, {0, 0}};
    out.points.resize(2 * m);
    out.component.resize(2 * m);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t k = 0; k < m; ++k) {
            const double x = u(rng), y = u(rng);
            out.points[c * m + k] = {x + 3.0 * static_cast<double>(c), y};
            out.component[c * m + k] = static_cast<int>(c);
        }

    std::vector<Edge> edges;
    for (std::size_t c = 0; c < 2; ++c) {
        std::vector<Point> pts(out.points.begin() + static_cast<std::ptrdiff_t>(c * m),
                               out.points.begin() + static_cast<std::ptrdiff_t>((c + 1) * m));
        const auto g = gabriel_graph(pts);
        for (const auto& e : g.edges())
            edges.push_back({e.i + c * m, e.j + c * m, 1.0});
    }

    // Closest cross pair; the globally closest pair is mutually nearest.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = m; j < 2 * m; ++j) {
            const double d = dist(out.points[i], out.points[j]);
            if (d < best) {
                best = d;
                out.bridge = {i, j};
            }
        }
    edges.push_back({out.bridge.first, out.bridge.second, 1.0});

    if (design.distance_weights) {
        double dmax = 0.0;
        for (const auto& e : edges)
            dmax = std::max(dmax, dist(out.points[e.i], out.points[e.j]));
        for (auto& e : edges)
            e.w = dmax - dist(out.points[e.i], out.points[e.j]);
    }
    out.X = StructuralNetwork(default_ids(2 * m), std::move(edges));
    return out;
}

Partition assign_and_swap(const SimDesign& design, const TwoComponentLayout& layout) {
    design.validate();
    const auto m = static_cast<std::size_t>(design.n_per_component);
    if (layout.component.size() != 2 * m)
        throw std::invalid_argument("assign_and_swap: layout does not match the design");
    std::vector<int> labels = layout.component;

    std::mt19937_64 rng(derive_seed(design.seed, {2}));
    std::vector<std::size_t> a, b;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (layout.component[i] == 0 ? a : b).push_back(i);
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    const auto k = static_cast<std::size_t>(design.n_swap_pairs);
    if (k > a.size() || k > b.size())
        throw std::invalid_argument("assign_and_swap: not enough nodes for the requested swaps");
    for (std::size_t s = 0; s < k; ++s)
        std::swap(labels[a[s]], labels[b[s]]);
    return Partition(std::move(labels), design.Q);
}

InteractionNetwork sample_interactions(const Partition& truth, const SimDesign& design,
                                       const std::vector<std::string>& node_ids) {
    if (!(design.sigma >= 0.0))
        throw std::invalid_argument("sample_interactions: sigma must be >= 0");
    const std::size_t n = truth.size();
    std::mt19937_64 rng(derive_seed(design.seed, {3}));
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix Y(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double mean = truth.labels[i] == truth.labels[j] ? design.mu : design.nu;
            Y(i, j) = Y(j, i) = mean + design.sigma * z(rng);
        }
    return InteractionNetwork(node_ids, std::move(Y));
}

double spatial_discordance(const Partition& z, const StructuralNetwork& X) {
    if (z.size() != X.size())
        throw std::invalid_argument("spatial_discordance: size mismatch");
    if (X.edges().empty())
        throw std::invalid_argument("spatial_discordance: network has no edges");
    std::size_t d = 0;
    for (const auto& e : X.edges())
        if (z.labels[e.i] != z.labels[e.j])
            ++d;
    return static_cast<double>(d) / static_cast<double>(X.edges().size());
}

SimReplicate simulate_replicate(const SimDesign& design) {
    auto layout = make_two_component(design);
    auto truth = assign_and_swap(design, layout);
    auto Y = sample_interactions(truth, design, layout.X.node_ids());
    return {std::move(layout), std::move(truth), std::move(Y)};
}

} // namespace spclust
