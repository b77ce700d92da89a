#pragma once

#include "spclust/graph.hpp"
#include "spclust/matrix.hpp"

#include <span>

namespace spclust {

/// Hubert-Arabie adjusted Rand index. Throws std::invalid_argument on a
/// length mismatch or fewer than 2 items. Returns 1 when both partitions
/// are trivial in the same way (the index is 0/0 there).
double adjusted_rand(std::span<const int> a, std::span<const int> b);
double adjusted_rand(const Partition& a, const Partition& b);

/// Mean of Y_ij over unordered pairs whose labels are {q, l}. Cells with no
/// pairs (an empty group, or a singleton group on the diagonal) are NaN.
Matrix group_distance_matrix(const InteractionNetwork& Y, const Partition& z);

/// Pair-weighted mean of the diagonal of group_distance_matrix, i.e. the
/// mean of Y_ij over all same-group pairs.
double mean_within_group(const InteractionNetwork& Y, const Partition& z);

} // namespace spclust
