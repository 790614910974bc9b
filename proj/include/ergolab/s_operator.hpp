#ifndef ERGOLAB_S_OPERATOR_HPP
#define ERGOLAB_S_OPERATOR_HPP

#include <Eigen/Dense>

#include "ergolab/graph.hpp"
#include "ergolab/graph_spectrum.hpp"

namespace ergolab::graph {

/// Coefficient of sum_{z in E_{2j,2k}} a(z) in the kernel of
/// P_{2n}(T_q/2) a P_{2n}(T_q/2) on the tree (zero unless j, k <= n).
double kernel_coefficient(int q, int n, int j, int k);

/// Row x of the tree kernel K_{2n}(x, .) assembled from the level sets
/// E_{2j,2k}(x, y) = {z : d(x,z) = 2j, d(y,z) = 2k}. Distances are graph
/// distances, so the result is the tree kernel only where the ball of
/// radius 4n around x is a tree.
Eigen::VectorXd kernel_row_from_level_sets(const Graph& g, const Eigen::VectorXd& a, int n, int x);

/// Matrix of S~_{2j,2k,2l}: entry (x, y) is sum_{z in E_{2j,2k}(x, y)} a(z)
/// when the lift of y sits at tree distance 2l from x. Rows with injectivity
/// radius <= 4T are zero; level sets are computed on the lift of the ball of
/// radius 4T around x, which the injectivity radius makes a tree.
Eigen::MatrixXd build_S_operator(const Graph& g, const Eigen::VectorXd& a, int j, int k, int l, int T);

/// Hilbert-Schmidt inner product sum_ij m1_ij m2_ij.
double hs_inner(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2);

}  // namespace ergolab::graph

#endif  // ERGOLAB_S_OPERATOR_HPP
