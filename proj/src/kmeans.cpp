#include "spclust/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace spclust {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

} // namespace

KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iters) {
    const std::size_t n = points.rows(), dim = points.cols();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kmeans: need 1 <= k <= number of points");
    const auto K = static_cast<std::size_t>(k);
    std::mt19937_64 rng(seed);

    KMeansResult res;
    res.centers = Matrix(K, dim);
    res.labels.assign(n, 0);

    // k-means++ seeding
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::copy(points.row(first).begin(), points.row(first).end(), res.centers.row(0).begin());
    for (std::size_t c = 1; c < K; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(points.row(i), res.centers.row(c - 1)));
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            for (pick = 0; pick + 1 < n; ++pick) {
                u -= d2[pick];
                if (u < 0.0)
                    break;
            }
        } else {
            res.degenerate = true;
            pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        }
        std::copy(points.row(pick).begin(), points.row(pick).end(), res.centers.row(c).begin());
    }

    std::vector<std::size_t> counts(K);
    for (int it = 0; it < max_iters; ++it) {
        res.iterations = it + 1;
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < K; ++c) {
                const double d = sq_dist(points.row(i), res.centers.row(c));
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            if (res.labels[i] != static_cast<int>(best) || it == 0) {
                changed = changed || res.labels[i] != static_cast<int>(best);
                res.labels[i] = static_cast<int>(best);
            }
        }
        if (!changed && it > 0)
            break;
        Matrix sums(K, dim);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(res.labels[i]);
            ++counts[c];
            auto s = sums.row(c);
            const auto p = points.row(i);
            for (std::size_t d = 0; d < dim; ++d)
                s[d] += p[d];
        }
        // Empty clusters keep their previous center.
        for (std::size_t c = 0; c < K; ++c)
            if (counts[c] > 0)
                for (std::size_t d = 0; d < dim; ++d)
                    res.centers(c, d) = sums(c, d) / static_cast<double>(counts[c]);
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (int l : res.labels)
        ++counts[static_cast<std::size_t>(l)];
    if (std::find(counts.begin(), counts.end(), 0) != counts.end())
        res.degenerate = true;
    return res;
}

} // namespace spclust
