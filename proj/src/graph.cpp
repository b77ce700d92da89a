#include "spclust/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace spclust {

namespace {

void check_unique(const std::vector<std::string>& ids) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second)
            throw std::invalid_argument("duplicate node id '" + id + "'");
}

} // namespace

InteractionNetwork::InteractionNetwork(std::vector<std::string> node_ids, Matrix values)
    : ids_(std::move(node_ids)), values_(std::move(values)) {
    const std::size_t n = ids_.size();
    if (n < 2)
        throw std::invalid_argument("interaction network needs at least 2 nodes");
    if (values_.rows() != n || values_.cols() != n)
        throw std::invalid_argument("interaction matrix must be " + std::to_string(n) + "x" +
                                    std::to_string(n));
    check_unique(ids_);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = values_(i, j), b = values_(j, i);
            if (!std::isfinite(a) || !std::isfinite(b))
                throw std::invalid_argument("non-finite interaction value at (" + ids_[i] + ", " +
                                            ids_[j] + ")");
            if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
                throw std::invalid_argument("interaction matrix not symmetric at (" + ids_[i] +
                                            ", " + ids_[j] + ")");
        }
}

StructuralNetwork::StructuralNetwork(std::vector<std::string> node_ids, std::vector<Edge> edges)
    : ids_(std::move(node_ids)), edges_(std::move(edges)) {
    const std::size_t n = ids_.size();
    check_unique(ids_);
    for (auto& e : edges_) {
        if (e.i >= n || e.j >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.i == e.j)
            throw std::invalid_argument("self-loop on node '" + ids_[e.i] + "'");
        if (!(e.w >= 0.0) || !std::isfinite(e.w))
            throw std::invalid_argument("edge weight must be finite and nonnegative");
        if (e.i > e.j)
            std::swap(e.i, e.j);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    for (std::size_t k = 1; k < edges_.size(); ++k)
        if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
            throw std::invalid_argument("duplicate edge (" + ids_[edges_[k].i] + ", " +
                                        ids_[edges_[k].j] + ")");

    adj_.offsets.assign(n + 1, 0);
    adj_.degree.assign(n, 0.0);
    for (const auto& e : edges_) {
        ++adj_.offsets[e.i + 1];
        ++adj_.offsets[e.j + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
        adj_.offsets[i + 1] += adj_.offsets[i];
    adj_.targets.resize(2 * edges_.size());
    adj_.weights.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(adj_.offsets.begin(), adj_.offsets.end() - 1);
    for (const auto& e : edges_) {
        adj_.targets[cursor[e.i]] = e.j;
        adj_.weights[cursor[e.i]++] = e.w;
        adj_.targets[cursor[e.j]] = e.i;
        adj_.weights[cursor[e.j]++] = e.w;
        adj_.degree[e.i] += e.w;
        adj_.degree[e.j] += e.w;
    }
}

double StructuralNetwork::mean_degree() const {
    if (ids_.empty())
        return 0.0;
    double s = 0.0;
    for (double d : adj_.degree)
        s += d;
    return s / static_cast<double>(ids_.size());
}

Partition::Partition(std::vector<int> l, int q) : labels(std::move(l)), Q(q) {
    if (Q < 1)
        throw std::invalid_argument("partition needs Q >= 1");
    for (int v : labels)
        if (v < 0 || v >= Q)
            throw std::invalid_argument("label " + std::to_string(v) + " outside 0.." +
                                        std::to_string(Q - 1));
}

int Partition::n_nonempty() const {
    std::vector<char> used(static_cast<std::size_t>(Q), 0);
    for (int v : labels)
        used[static_cast<std::size_t>(v)] = 1;
    return static_cast<int>(std::count(used.begin(), used.end(), 1));
}

Matrix Partition::one_hot() const {
    Matrix z(labels.size(), static_cast<std::size_t>(Q));
    for (std::size_t i = 0; i < labels.size(); ++i)
        z(i, static_cast<std::size_t>(labels[i])) = 1.0;
    return z;
}

SoftAssignment::SoftAssignment(Matrix tau) : tau_(std::move(tau)) {
    if (tau_.cols() < 1)
        throw std::invalid_argument("soft assignment needs at least one group");
    for (std::size_t i = 0; i < tau_.rows(); ++i) {
        double s = 0.0;
        for (double v : tau_.row(i)) {
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("soft assignment entry outside [0,1] in row " +
                                            std::to_string(i));
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-10)
            throw std::invalid_argument("soft assignment row " + std::to_string(i) +
                                        " does not sum to 1");
    }
}

SoftAssignment SoftAssignment::from_partition(const Partition& p, double eps) {
    const auto Q = static_cast<std::size_t>(p.Q);
    if (Q == 1)
        return SoftAssignment(Matrix(p.size(), 1, 1.0));
    Matrix tau(p.size(), Q, eps / static_cast<double>(Q - 1));
    for (std::size_t i = 0; i < p.size(); ++i)
        tau(i, static_cast<std::size_t>(p.labels[i])) = 1.0 - eps;
    return SoftAssignment(std::move(tau));
}

Matrix laplacian(const StructuralNetwork& X) {
    const std::size_t n = X.size();
    Matrix L(n, n);
    for (const auto& e : X.edges()) {
        L(e.i, e.j) -= e.w;
        L(e.j, e.i) -= e.w;
        L(e.i, e.i) += e.w;
        L(e.j, e.j) += e.w;
    }
    return L;
}

double local_variance(std::span<const double> u, const StructuralNetwork& X) {
    if (u.size() != X.size())
        throw std::invalid_argument("local_variance: vector length " + std::to_string(u.size()) +
                                    " != node count " + std::to_string(X.size()));
    double s = 0.0;
    for (const auto& e : X.edges()) {
        const double d = u[e.i] - u[e.j];
        s += e.w * d * d;
    }
    return s;
}

double penalty(const Matrix& tau, const StructuralNetwork& X) {
    if (tau.rows() != X.size())
        throw std::invalid_argument("penalty: label matrix has " + std::to_string(tau.rows()) +
                                    " rows, network has " + std::to_string(X.size()) + " nodes");
    if (tau.cols() < 1)
        throw std::invalid_argument("penalty: need at least one group");
    double s = 0.0;
    for (const auto& e : X.edges()) {
        double sq = 0.0;
        for (std::size_t q = 0; q < tau.cols(); ++q) {
            const double d = tau(e.i, q) - tau(e.j, q);
            sq += d * d;
        }
        s += e.w * sq;
    }
    return s;
}

double penalty(const SoftAssignment& tau, const StructuralNetwork& X) {
    return penalty(tau.matrix(), X);
}

double penalty(const Partition& z, const StructuralNetwork& X) {
    if (z.size() != X.size())
        throw std::invalid_argument("penalty: partition size mismatch");
    double s = 0.0;
    for (const auto& e : X.edges())
        if (z.labels[e.i] != z.labels[e.j])
            s += 2.0 * e.w;
    return s;
}

} // namespace spclust
