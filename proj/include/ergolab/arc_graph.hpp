#ifndef ERGOLAB_ARC_GRAPH_HPP
#define ERGOLAB_ARC_GRAPH_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ergolab/graph.hpp"

namespace ergolab::graph {

/// Directed edges of a graph with the non-backtracking transition structure:
/// arc a leads to arc b when target(a) = source(b) and b is not the reversal
/// of a.
class ArcGraph {
 public:
  explicit ArcGraph(const Graph& g);

  int size() const { return static_cast<int>(source_.size()); }
  int vertex_count() const { return vertex_count_; }
  int source(int a) const { return source_[a]; }
  int target(int a) const { return target_[a]; }
  int reversal(int a) const { return reversal_[a]; }

  std::span<const int> successors(int a) const;
  std::span<const int> predecessors(int a) const;

 private:
  int vertex_count_ = 0;
  std::vector<int> source_, target_, reversal_;
  std::vector<int> succ_offsets_, succ_;
  std::vector<int> pred_offsets_, pred_;
};

ArcGraph arc_graph(const Graph& g);

/// T'_q F(a) = (1/q) sum over non-backtracking successors b of F(b).
Eigen::VectorXd nb_operator_apply(const ArcGraph& ag, int q, const Eigen::VectorXd& f);
/// Adjoint of `nb_operator_apply`.
Eigen::VectorXd nb_operator_adjoint_apply(const ArcGraph& ag, int q, const Eigen::VectorXd& f);
/// Dense matrix of T'_q.
Eigen::MatrixXd nb_operator_matrix(const ArcGraph& ag, int q);

/// B f(a) = f(source(a)), E f(a) = f(target(a)).
Eigen::VectorXd lift_begin(const ArcGraph& ag, const Eigen::VectorXd& f);
Eigen::VectorXd lift_end(const ArcGraph& ag, const Eigen::VectorXd& f);

struct DecayOptions {
  double tolerance = 1e-8;
  int max_iterations = 20000;
};

/// Operator norms of (T'_q)^k, k = 0..kmax, restricted to the orthogonal
/// complement of span{B1, E1}, by power iteration on the compressed
/// operator. Entry 0 is the identity's norm, 1.
std::vector<double> nb_norm_decay(const ArcGraph& ag, int q, int kmax, const DecayOptions& opts = {});

/// Least-squares slope of log norms[k] against k over k = 1..norms.size()-1.
/// Throws std::invalid_argument with fewer than two points or a nonpositive norm.
double decay_slope(const std::vector<double>& norms);

}  // namespace ergolab::graph

#endif  // ERGOLAB_ARC_GRAPH_HPP
