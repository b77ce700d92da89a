#pragma once

// Dense inner loops of the variational EM. Each kernel exists twice: a plain
// serial reference used by the tests, and an OpenMP version used by the
// library. The OpenMP versions parallelize over rows and keep a fixed
// summation order, so their output does not depend on the thread count.

#include "spclust/graph.hpp"
#include "spclust/matrix.hpp"

#include <span>
#include <vector>

namespace spclust::kernels {

/// Exact maximizer over the simplex of
///   sum_q t_q b_q - (a/2) sum_q t_q^2 - sum_q t_q log t_q,   a >= 0,
/// i.e. the solution of log t_q + a t_q = b_q + c with sum_q t_q = 1.
/// a = 0 reduces to the softmax of b.
void penalized_row_optimum(std::span<const double> b, double a, std::span<double> out);

namespace serial {

/// out = phi * tau  (n x n times n x Q).
void products(const Matrix& phi, const Matrix& tau, Matrix& out);

/// out(i,q) = sum_k sum_l eta_k(q,l) * S_k(i,l).
void node_scores(const std::vector<Matrix>& S, const std::vector<Matrix>& eta, Matrix& out);

/// Undamped fixed-point map of the penalized E-step:
///   out(i,q) proportional to exp(log_alpha_q + scores(i,q)
///                                - 2 lambda sum_j X_ij (tau_iq - tau_jq)),
/// normalized per row after max subtraction.
void fixed_point_update(const Matrix& scores, std::span<const double> log_alpha,
                        const Matrix& tau, const Adjacency& adj, double lambda, Matrix& out);

/// out = tau' * S  (Q x Q).
void cell_sums(const Matrix& tau, const Matrix& S, Matrix& out);

/// Gabriel edges (i < j) among 2-D points, with no third point in the closed
/// disc whose diameter is segment ij.
std::vector<std::pair<std::size_t, std::size_t>> gabriel_edges(std::span<const double> xs,
                                                               std::span<const double> ys);

} // namespace serial

namespace omp {

void products(const Matrix& phi, const Matrix& tau, Matrix& out);
void node_scores(const std::vector<Matrix>& S, const std::vector<Matrix>& eta, Matrix& out);
void fixed_point_update(const Matrix& scores, std::span<const double> log_alpha,
                        const Matrix& tau, const Adjacency& adj, double lambda, Matrix& out);
void cell_sums(const Matrix& tau, const Matrix& S, Matrix& out);
std::vector<std::pair<std::size_t, std::size_t>> gabriel_edges(std::span<const double> xs,
                                                               std::span<const double> ys);

} // namespace omp

} // namespace spclust::kernels
