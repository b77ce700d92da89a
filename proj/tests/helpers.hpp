#pragma once

// Small builders shared by the unit tests.

#include "spclust/graph.hpp"
#include "spclust/matrix.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <random>
#include <string>
#include <vector>

namespace testing {

inline std::vector<std::string> ids(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back("v" + std::to_string(i));
    return v;
}

inline spclust::InteractionNetwork network(const spclust::Matrix& m) {
    return spclust::InteractionNetwork(ids(m.rows()), m);
}

inline spclust::Matrix random_symmetric(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                        double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    spclust::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m(i, j) = m(j, i) = u(rng);
    return m;
}

inline spclust::Matrix random_tau(std::size_t n, std::size_t Q, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    spclust::Matrix t(n, Q);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q < Q; ++q)
            s += t(i, q) = u(rng);
        for (std::size_t q = 0; q < Q; ++q)
            t(i, q) /= s;
    }
    return t;
}

inline std::vector<int> random_labels(std::size_t n, int Q, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> u(0, Q - 1);
    std::vector<int> z(n);
    for (auto& v : z)
        v = u(rng);
    return z;
}

/// Erdos-Renyi edges with probability p, weight 1 or uniform in (0, 2].
inline spclust::StructuralNetwork random_structure(std::size_t n, double p, std::mt19937_64& rng,
                                                   bool weighted = false) {
    std::bernoulli_distribution keep(p);
    std::uniform_real_distribution<double> w(0.0, 2.0);
    std::vector<spclust::Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (keep(rng))
                edges.push_back({i, j, weighted ? 2.0 - w(rng) : 1.0});
    return spclust::StructuralNetwork(ids(n), std::move(edges));
}

// Temporary directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "spclust-XXXXXX").string();
        if (!mkdtemp(tmpl.data()))
            throw std::runtime_error("mkdtemp failed");
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

} // namespace testing
