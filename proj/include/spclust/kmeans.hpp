#pragma once

#include "spclust/matrix.hpp"

#include <cstdint>
#include <vector>

namespace spclust {

struct KMeansResult {
    std::vector<int> labels;
    Matrix centers;
    int iterations = 0;
    /// Some cluster ended empty (or seeding found fewer than k distinct points).
    bool degenerate = false;
};

/// Lloyd's algorithm with k-means++ seeding on the rows of `points`.
KMeansResult kmeans(const Matrix& points, int k, std::uint64_t seed, int max_iters = 50);

} // namespace spclust
