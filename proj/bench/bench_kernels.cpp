#include "spclust/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace spclust;

namespace {

Matrix symmetric(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = m(j, i) = g(rng);
    return m;
}

Matrix stochastic(std::size_t n, std::size_t Q, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
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

template <auto Fn>
void products(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix phi = symmetric(n, 1), tau = stochastic(n, 4, 2);
    Matrix out;
    for (auto _ : state) {
        Fn(phi, tau, out);
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * 4));
}

template <auto Fn>
void gabriel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = u(rng);
        ys[i] = u(rng);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(Fn(xs, ys));
}

} // namespace

BENCHMARK(products<kernels::serial::products>)->Name("products/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(products<kernels::omp::products>)->Name("products/omp")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(gabriel<kernels::serial::gabriel_edges>)->Name("gabriel/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(gabriel<kernels::omp::gabriel_edges>)->Name("gabriel/omp")->RangeMultiplier(2)->Range(64, 512);

BENCHMARK_MAIN();
