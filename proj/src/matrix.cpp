#include "spclust/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spclust {

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

} // namespace spclust
