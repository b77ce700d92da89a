#include "helpers.hpp"

#include "spclust/kernels.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace spclust;
namespace ks = spclust::kernels::serial;
namespace ko = spclust::kernels::omp;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix m(r, c);
    for (auto& v : m.data())
        v = g(rng);
    return m;
}

// Row objective of penalized_row_optimum.
double row_objective(std::span<const double> b, double a, std::span<const double> t) {
    double s = 0.0;
    for (std::size_t q = 0; q < b.size(); ++q) {
        s += t[q] * b[q] - 0.5 * a * t[q] * t[q];
        if (t[q] > 0.0)
            s -= t[q] * std::log(t[q]);
    }
    return s;
}

} // namespace

TEST_CASE("serial and OpenMP kernels agree exactly") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 5 + rng() % 60, Q = 1 + rng() % 4;
        const Matrix phi = testing::random_symmetric(n, rng);
        const Matrix tau = testing::random_tau(n, Q, rng);

        Matrix a, b;
        ks::products(phi, tau, a);
        ko::products(phi, tau, b);
        CHECK(a == b);

        std::vector<Matrix> S{a, random_matrix(n, Q, rng)};
        std::vector<Matrix> eta{random_matrix(Q, Q, rng), random_matrix(Q, Q, rng)};
        Matrix sa, sb;
        ks::node_scores(S, eta, sa);
        ko::node_scores(S, eta, sb);
        CHECK(sa == sb);

        const auto X = testing::random_structure(n, 0.2, rng, true);
        std::vector<double> log_alpha(Q, -std::log(static_cast<double>(Q)));
        Matrix fa, fb;
        ks::fixed_point_update(sa, log_alpha, tau, X.adjacency(), 0.7, fa);
        ko::fixed_point_update(sa, log_alpha, tau, X.adjacency(), 0.7, fb);
        CHECK(fa == fb);

        Matrix ca, cb;
        ks::cell_sums(tau, a, ca);
        ko::cell_sums(tau, a, cb);
        CHECK(ca == cb);

        std::uniform_real_distribution<double> u(0.0, 10.0);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = u(rng);
            ys[i] = u(rng);
        }
        CHECK(ks::gabriel_edges(xs, ys) == ko::gabriel_edges(xs, ys));
    }
}

TEST_CASE("products and cell sums match naive loops") {
    std::mt19937_64 rng(32);
    const std::size_t n = 7, Q = 3;
    const Matrix phi = testing::random_symmetric(n, rng);
    const Matrix tau = testing::random_tau(n, Q, rng);
    Matrix S, T;
    ks::products(phi, tau, S);
    ks::cell_sums(tau, S, T);
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t l = 0; l < Q; ++l) {
            double t = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    t += tau(i, q) * phi(i, j) * tau(j, l);
            CHECK(T(q, l) == doctest::Approx(t).epsilon(1e-12));
        }
}

TEST_CASE("fixed-point map without penalty is a softmax of the scores") {
    std::mt19937_64 rng(33);
    const std::size_t n = 6, Q = 3;
    const Matrix scores = random_matrix(n, Q, rng);
    const Matrix tau = testing::random_tau(n, Q, rng);
    const auto X = testing::random_structure(n, 0.5, rng);
    std::vector<double> log_alpha{std::log(0.2), std::log(0.3), std::log(0.5)};
    Matrix out;
    ks::fixed_point_update(scores, log_alpha, tau, X.adjacency(), 0.0, out);
    for (std::size_t i = 0; i < n; ++i) {
        double z = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            z += std::exp(log_alpha[q] + scores(i, q));
        for (std::size_t q = 0; q < Q; ++q)
            CHECK(out(i, q) == doctest::Approx(std::exp(log_alpha[q] + scores(i, q)) / z));
    }
}

TEST_CASE("penalized row optimum") {
    std::mt19937_64 rng(34);
    std::normal_distribution<double> g(0.0, 3.0);
    std::uniform_real_distribution<double> ua(0.0, 50.0);

    SUBCASE("a = 0 is the softmax") {
        std::vector<double> b{1.0, -2.0, 0.5}, t(3);
        kernels::penalized_row_optimum(b, 0.0, t);
        double z = 0.0;
        for (double v : b)
            z += std::exp(v);
        for (std::size_t q = 0; q < 3; ++q)
            CHECK(t[q] == doctest::Approx(std::exp(b[q]) / z));
    }

    SUBCASE("stationarity conditions hold") {
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t Q = 2 + rng() % 5;
            std::vector<double> b(Q), t(Q);
            for (auto& v : b)
                v = g(rng);
            const double a = ua(rng);
            kernels::penalized_row_optimum(b, a, t);
            double s = 0.0;
            for (double v : t) {
                CHECK(v > 0.0);
                s += v;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            const double c0 = std::log(t[0]) + a * t[0] - b[0];
            for (std::size_t q = 1; q < Q; ++q)
                CHECK(std::log(t[q]) + a * t[q] - b[q] == doctest::Approx(c0).epsilon(1e-8));
        }
    }

    SUBCASE("two groups match a golden-section search") {
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> b{g(rng), g(rng)}, t(2);
            const double a = ua(rng);
            kernels::penalized_row_optimum(b, a, t);
            auto f = [&](double x) {
                const double tt[2] = {x, 1.0 - x};
                return row_objective(b, a, tt);
            };
            double lo = 0.0, hi = 1.0;
            const double r = (std::sqrt(5.0) - 1.0) / 2.0;
            for (int it = 0; it < 200; ++it) {
                const double m1 = hi - r * (hi - lo), m2 = lo + r * (hi - lo);
                if (f(m1) < f(m2))
                    lo = m1;
                else
                    hi = m2;
            }
            CHECK(t[0] == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
            CHECK(row_objective(b, a, t) >= f(0.5 * (lo + hi)) - 1e-12);
        }
    }

    SUBCASE("extreme scores stay finite") {
        std::vector<double> b{800.0, -800.0, 0.0}, t(3);
        kernels::penalized_row_optimum(b, 1e4, t);
        for (double v : t)
            CHECK(std::isfinite(v));
        CHECK(t[0] + t[1] + t[2] == doctest::Approx(1.0));
    }
}

TEST_CASE("gabriel kernel on a square with its centre") {
    // The centre is inside both diagonal discs and on the boundary of every
    // side's disc, so only the four spokes survive.
    std::vector<double> xs{0, 1, 1, 0, 0.5}, ys{0, 0, 1, 1, 0.5};
    auto e = ks::gabriel_edges(xs, ys);
    std::sort(e.begin(), e.end());
    const std::vector<std::pair<std::size_t, std::size_t>> expect{
        {0, 4}, {1, 4}, {2, 4}, {3, 4}};
    CHECK(e == expect);
}
