#include "spclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace spclust {

namespace {

double choose2(double x) { return 0.5 * x * (x - 1.0); }

} // namespace

double adjusted_rand(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("adjusted_rand: partitions differ in length");
    if (a.size() < 2)
        throw std::invalid_argument("adjusted_rand: need at least 2 items");
    std::map<std::pair<int, int>, double> table;
    std::map<int, double> ra, rb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[{a[i], b[i]}] += 1.0;
        ra[a[i]] += 1.0;
        rb[b[i]] += 1.0;
    }
    double index = 0.0, sa = 0.0, sb = 0.0;
    for (const auto& [key, c] : table)
        index += choose2(c);
    for (const auto& [key, c] : ra)
        sa += choose2(c);
    for (const auto& [key, c] : rb)
        sb += choose2(c);
    const double expected = sa * sb / choose2(static_cast<double>(a.size()));
    const double max_index = 0.5 * (sa + sb);
    if (max_index == expected)
        return 1.0;
    return (index - expected) / (max_index - expected);
}

double adjusted_rand(const Partition& a, const Partition& b) {
    return adjusted_rand(std::span<const int>(a.labels), std::span<const int>(b.labels));
}

Matrix group_distance_matrix(const InteractionNetwork& Y, const Partition& z) {
    if (z.size() != Y.size())
        throw std::invalid_argument("group_distance_matrix: size mismatch");
    const auto Q = static_cast<std::size_t>(z.Q);
    Matrix sum(Q, Q), count(Q, Q);
    for (std::size_t i = 0; i < Y.size(); ++i)
        for (std::size_t j = i + 1; j < Y.size(); ++j) {
            auto q = static_cast<std::size_t>(z.labels[i]);
            auto l = static_cast<std::size_t>(z.labels[j]);
            if (q > l)
                std::swap(q, l);
            sum(q, l) += Y(i, j);
            count(q, l) += 1.0;
        }
    Matrix out(Q, Q, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t l = q; l < Q; ++l)
            if (count(q, l) > 0.0)
                out(q, l) = out(l, q) = sum(q, l) / count(q, l);
    return out;
}

double mean_within_group(const InteractionNetwork& Y, const Partition& z) {
    if (z.size() != Y.size())
        throw std::invalid_argument("mean_within_group: size mismatch");
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < Y.size(); ++i)
        for (std::size_t j = i + 1; j < Y.size(); ++j)
            if (z.labels[i] == z.labels[j]) {
                s += Y(i, j);
                c += 1.0;
            }
    return c > 0.0 ? s / c : std::numeric_limits<double>::quiet_NaN();
}

} // namespace spclust
