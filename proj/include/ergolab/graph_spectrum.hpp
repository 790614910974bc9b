#ifndef ERGOLAB_GRAPH_SPECTRUM_HPP
#define ERGOLAB_GRAPH_SPECTRUM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergolab/graph.hpp"

namespace ergolab::graph {

inline constexpr int kDefaultDenseLimit = 4096;

/// Ascending eigenvalues of T_q with orthonormal eigenvectors in the columns.
struct EigenSystem {
  int q = 0;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  int size() const { return static_cast<int>(values.size()); }
};

/// Per-vertex test function. Experiment observables have zero sum and
/// sup norm at most 1 (see `is_admissible`).
struct Observable {
  Eigen::VectorXd values;

  double sup_norm() const { return values.cwiseAbs().maxCoeff(); }
  double l2_norm_squared() const { return values.squaredNorm(); }
  bool is_admissible(double tol = 1e-10) const;

  /// Uniform values in [-1, 1], mean removed, rescaled so that sup <= 1.
  static Observable random_mean_zero(int k, std::uint64_t seed);
  /// +1 on the first half of the vertices, -1 on the second (k even).
  static Observable half_split(int k);
};

/// (T_q v)(x) = q^{-1/2} sum_{y ~ x} v(y), multi-edges with multiplicity.
Eigen::VectorXd tq_apply(const Graph& g, const Eigen::VectorXd& v);

/// Dense matrix of T_q.
Eigen::MatrixXd tq_matrix(const Graph& g);

/// Full dense symmetric eigensolve of T_q. Throws std::invalid_argument when
/// the graph exceeds `dense_limit` vertices and std::runtime_error when the
/// solver does not converge.
EigenSystem eigensystem(const Graph& g, int dense_limit = kDefaultDenseLimit);

/// Eigenvalues only (cheaper for spectral statistics).
Eigen::VectorXd eigenvalues(const Graph& g, int dense_limit = kDefaultDenseLimit);

/// Largest |lambda| after removing the single largest (trivial) eigenvalue.
double nontrivial_lambda_star(const Eigen::VectorXd& ascending_values);

/// beta = log(q)/2 - arccosh(max(lambda_star, 2)/2). Throws for k = 1.
double spectral_gap(const EigenSystem& es);
double spectral_gap(const Eigen::VectorXd& ascending_values, int q);

/// (1/k) sum_j <psi_j, a psi_j>^2.
double quantum_variance(const EigenSystem& es, const Observable& a);

/// <psi_j, a psi_j> for every j.
Eigen::VectorXd diagonal_elements(const EigenSystem& es, const Observable& a);

/// P_n(T_q/2) v via u_{m+1} = T_q u_m - u_{m-1}, u_0 = v, u_1 = T_q v / 2.
Eigen::VectorXd chebyshev_propagate(const Graph& g, int n, const Eigen::VectorXd& v);

/// A_T = (1/T) sum_{n=1..T} P_{2n}(T_q/2) M_a P_{2n}(T_q/2), assembled column
/// by column with `chebyshev_propagate`. Rejects observables that are not
/// mean-zero with sup <= 1.
Eigen::MatrixXd time_averaged_operator(const Graph& g, const Observable& a, int T,
                                       int dense_limit = kDefaultDenseLimit);

/// The same operator assembled in the eigenbasis: V ((V^T M_a V) o C) V^T with
/// C_ij = (1/T) sum_n P_{2n}(lambda_i/2) P_{2n}(lambda_j/2).
Eigen::MatrixXd time_averaged_operator_spectral(const EigenSystem& es, const Observable& a, int T);

/// ||A_T||_HS from the eigenbasis without forming A_T.
double time_averaged_hs_norm(const EigenSystem& es, const Observable& a, int T);

/// A_T with the rows of vertices with injectivity radius <= 4T set to zero.
Eigen::MatrixXd restrict_rows_to_injective(const Graph& g, const Eigen::MatrixXd& m, int T);

/// (1/T) sum_{n=1..T} P_{2n}(lambda/2)^2; at least 0.3 for T >= 10.
double time_average_weight(double lambda, int T);

/// sqrt(sum |m_ij|^2).
double hs_norm(const Eigen::MatrixXd& m);

}  // namespace ergolab::graph

#endif  // ERGOLAB_GRAPH_SPECTRUM_HPP
