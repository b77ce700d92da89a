#include "spclust/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace spclust::kernels {

namespace {

void check_products(const Matrix& phi, const Matrix& tau, Matrix& out) {
    if (phi.rows() != phi.cols() || phi.cols() != tau.rows())
        throw std::invalid_argument("products: shape mismatch");
    if (out.rows() != phi.rows() || out.cols() != tau.cols())
        out = Matrix(phi.rows(), tau.cols());
}

inline void products_row(const Matrix& phi, const Matrix& tau, Matrix& out, std::size_t i) {
    const std::size_t n = phi.cols(), Q = tau.cols();
    auto o = out.row(i);
    std::fill(o.begin(), o.end(), 0.0);
    const auto p = phi.row(i);
    for (std::size_t j = 0; j < n; ++j) {
        const double v = p[j];
        if (v == 0.0)
            continue;
        const auto t = tau.row(j);
        for (std::size_t q = 0; q < Q; ++q)
            o[q] += v * t[q];
    }
}

inline void node_scores_row(const std::vector<Matrix>& S, const std::vector<Matrix>& eta,
                            Matrix& out, std::size_t i) {
    const std::size_t Q = out.cols();
    for (std::size_t q = 0; q < Q; ++q) {
        double s = 0.0;
        for (std::size_t k = 0; k < S.size(); ++k) {
            const auto e = eta[k].row(q);
            const auto x = S[k].row(i);
            for (std::size_t l = 0; l < Q; ++l)
                s += e[l] * x[l];
        }
        out(i, q) = s;
    }
}

void check_scores(const std::vector<Matrix>& S, const std::vector<Matrix>& eta, Matrix& out) {
    if (S.empty() || S.size() != eta.size())
        throw std::invalid_argument("node_scores: feature count mismatch");
    if (out.rows() != S[0].rows() || out.cols() != S[0].cols())
        out = Matrix(S[0].rows(), S[0].cols());
}

inline void fixed_point_row(const Matrix& scores, std::span<const double> log_alpha,
                            const Matrix& tau, const Adjacency& adj, double lambda, Matrix& out,
                            std::size_t i) {
    const std::size_t Q = tau.cols();
    auto o = out.row(i);
    for (std::size_t q = 0; q < Q; ++q) {
        double grad = 0.0;
        for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e)
            grad += adj.weights[e] * (tau(i, q) - tau(adj.targets[e], q));
        o[q] = log_alpha[q] + scores(i, q) - 2.0 * lambda * grad;
    }
    const double m = *std::max_element(o.begin(), o.end());
    double z = 0.0;
    for (auto& v : o) {
        v = std::exp(v - m);
        z += v;
    }
    for (auto& v : o)
        v /= z;
}

void check_fixed_point(const Matrix& scores, std::span<const double> log_alpha, const Matrix& tau,
                       const Adjacency& adj, Matrix& out) {
    if (scores.rows() != tau.rows() || scores.cols() != tau.cols() ||
        log_alpha.size() != tau.cols() || adj.offsets.size() != tau.rows() + 1)
        throw std::invalid_argument("fixed_point_update: shape mismatch");
    if (out.rows() != tau.rows() || out.cols() != tau.cols())
        out = Matrix(tau.rows(), tau.cols());
}

// Rows are summed in fixed blocks and the block partials are added in order.
constexpr std::size_t kCellBlock = 64;

void check_cell_sums(const Matrix& tau, const Matrix& S, Matrix& out) {
    if (tau.rows() != S.rows() || tau.cols() != S.cols())
        throw std::invalid_argument("cell_sums: shape mismatch");
    if (out.rows() != tau.cols() || out.cols() != tau.cols())
        out = Matrix(tau.cols(), tau.cols());
}

struct SortedPoints {
    std::vector<std::size_t> order;  // indices sorted by x
    std::vector<double> sx;          // x in sorted order
};

SortedPoints sort_by_x(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("gabriel_edges: coordinate length mismatch");
    SortedPoints sp;
    sp.order.resize(xs.size());
    std::iota(sp.order.begin(), sp.order.end(), std::size_t{0});
    std::sort(sp.order.begin(), sp.order.end(), [&](std::size_t a, std::size_t b) {
        return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
    });
    sp.sx.reserve(xs.size());
    for (auto k : sp.order)
        sp.sx.push_back(xs[k]);
    return sp;
}

// k lies in the closed diametral disc of ij iff (p_k - p_i).(p_k - p_j) <= 0.
void gabriel_from(std::span<const double> xs, std::span<const double> ys, const SortedPoints& sp,
                  std::size_t i, std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const std::size_t n = xs.size();
    for (std::size_t j = i + 1; j < n; ++j) {
        const double mx = 0.5 * (xs[i] + xs[j]);
        const double r = 0.5 * std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
        auto lo = std::lower_bound(sp.sx.begin(), sp.sx.end(), mx - r);
        auto hi = std::upper_bound(sp.sx.begin(), sp.sx.end(), mx + r);
        bool blocked = false;
        for (auto it = lo; it != hi && !blocked; ++it) {
            const std::size_t k = sp.order[static_cast<std::size_t>(it - sp.sx.begin())];
            if (k == i || k == j)
                continue;
            const double dot = (xs[k] - xs[i]) * (xs[k] - xs[j]) + (ys[k] - ys[i]) * (ys[k] - ys[j]);
            blocked = dot <= 0.0;
        }
        if (!blocked)
            edges.emplace_back(i, j);
    }
}

} // namespace

namespace {

// Root of w + a e^w = v (a > 0). h(w) is convex and increasing, so Newton
// from a point right of the root descends monotonically.
double solve_log_coordinate(double v, double a) {
    double w = std::min(v, std::log(std::max(v, a) / a));
    for (int it = 0; it < 100; ++it) {
        const double e = a * std::exp(w);
        const double step = (w + e - v) / (1.0 + e);
        w -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(w)))
            break;
    }
    return w;
}

} // namespace

void penalized_row_optimum(std::span<const double> b, double a, std::span<double> out) {
    const std::size_t Q = b.size();
    if (out.size() != Q || Q == 0)
        throw std::invalid_argument("penalized_row_optimum: size mismatch");
    const double bmax = *std::max_element(b.begin(), b.end());
    if (!(a > 0.0)) {
        double s = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            s += out[q] = std::exp(b[q] - bmax);
        for (auto& v : out)
            v /= s;
        return;
    }
    // Newton on the multiplier c: sum_q t_q(c) is convex and increasing in c.
    // Starting from the softmax shift (sum <= 1) the first step may overshoot,
    // after which the iterates decrease monotonically to the root.
    double s0 = 0.0;
    for (double v : b)
        s0 += std::exp(v - bmax);
    double c = -bmax - std::log(s0);
    for (int it = 0; it < 200; ++it) {
        double sum = 0.0, slope = 0.0;
        for (std::size_t q = 0; q < Q; ++q) {
            const double t = std::exp(solve_log_coordinate(b[q] + c, a));
            out[q] = t;
            sum += t;
            slope += t / (1.0 + a * t);
        }
        const double step = (sum - 1.0) / slope;
        c -= step;
        if (std::abs(sum - 1.0) <= 1e-15)
            break;
    }
    double s = 0.0;
    for (double v : out)
        s += v;
    for (auto& v : out)
        v /= s;
}

namespace serial {

void products(const Matrix& phi, const Matrix& tau, Matrix& out) {
    check_products(phi, tau, out);
    for (std::size_t i = 0; i < phi.rows(); ++i)
        products_row(phi, tau, out, i);
}

void node_scores(const std::vector<Matrix>& S, const std::vector<Matrix>& eta, Matrix& out) {
    check_scores(S, eta, out);
    for (std::size_t i = 0; i < out.rows(); ++i)
        node_scores_row(S, eta, out, i);
}

void fixed_point_update(const Matrix& scores, std::span<const double> log_alpha,
                        const Matrix& tau, const Adjacency& adj, double lambda, Matrix& out) {
    check_fixed_point(scores, log_alpha, tau, adj, out);
    for (std::size_t i = 0; i < tau.rows(); ++i)
        fixed_point_row(scores, log_alpha, tau, adj, lambda, out, i);
}

void cell_sums(const Matrix& tau, const Matrix& S, Matrix& out) {
    check_cell_sums(tau, S, out);
    out.fill(0.0);
    const std::size_t Q = tau.cols();
    for (std::size_t i = 0; i < tau.rows(); ++i)
        for (std::size_t q = 0; q < Q; ++q)
            for (std::size_t l = 0; l < Q; ++l)
                out(q, l) += tau(i, q) * S(i, l);
}

std::vector<std::pair<std::size_t, std::size_t>> gabriel_edges(std::span<const double> xs,
                                                               std::span<const double> ys) {
    const auto sp = sort_by_x(xs, ys);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < xs.size(); ++i)
        gabriel_from(xs, ys, sp, i, edges);
    return edges;
}

} // namespace serial

namespace omp {

void products(const Matrix& phi, const Matrix& tau, Matrix& out) {
    check_products(phi, tau, out);
    const auto n = static_cast<std::ptrdiff_t>(phi.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        products_row(phi, tau, out, static_cast<std::size_t>(i));
}

void node_scores(const std::vector<Matrix>& S, const std::vector<Matrix>& eta, Matrix& out) {
    check_scores(S, eta, out);
    const auto n = static_cast<std::ptrdiff_t>(out.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        node_scores_row(S, eta, out, static_cast<std::size_t>(i));
}

void fixed_point_update(const Matrix& scores, std::span<const double> log_alpha,
                        const Matrix& tau, const Adjacency& adj, double lambda, Matrix& out) {
    check_fixed_point(scores, log_alpha, tau, adj, out);
    const auto n = static_cast<std::ptrdiff_t>(tau.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        fixed_point_row(scores, log_alpha, tau, adj, lambda, out, static_cast<std::size_t>(i));
}

void cell_sums(const Matrix& tau, const Matrix& S, Matrix& out) {
    check_cell_sums(tau, S, out);
    const std::size_t Q = tau.cols();
    const std::size_t n_blocks = (tau.rows() + kCellBlock - 1) / kCellBlock;
    std::vector<Matrix> partial(n_blocks, Matrix(Q, Q));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) {
        auto& p = partial[static_cast<std::size_t>(b)];
        const std::size_t begin = static_cast<std::size_t>(b) * kCellBlock;
        const std::size_t end = std::min(tau.rows(), begin + kCellBlock);
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t q = 0; q < Q; ++q)
                for (std::size_t l = 0; l < Q; ++l)
                    p(q, l) += tau(i, q) * S(i, l);
    }
    out.fill(0.0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < p.data().size(); ++k)
            out.data()[k] += p.data()[k];
}

std::vector<std::pair<std::size_t, std::size_t>> gabriel_edges(std::span<const double> xs,
                                                               std::span<const double> ys) {
    const auto sp = sort_by_x(xs, ys);
    const std::size_t n = xs.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> per_row(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        gabriel_from(xs, ys, sp, static_cast<std::size_t>(i), per_row[static_cast<std::size_t>(i)]);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (auto& r : per_row)
        edges.insert(edges.end(), r.begin(), r.end());
    return edges;
}

} // namespace omp

} // namespace spclust::kernels
