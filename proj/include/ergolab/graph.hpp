#ifndef ERGOLAB_GRAPH_HPP
#define ERGOLAB_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ergolab::graph {

/// Undirected graph stored as neighbor lists, with a nominal branching
/// number q (nominal degree q+1).
///
/// Multi-edges and self-loops are representable: a self-loop at x puts x
/// twice in x's list, so every list entry is one edge endpoint. Vertices may
/// have fewer than q+1 endpoints (finite tree balls use this for their
/// leaves); experiment graphs are checked with `validate_experiment_graph`.
class Graph {
 public:
  Graph() = default;
  Graph(int q, std::vector<std::vector<int>> adjacency);

  int q() const { return q_; }
  int size() const { return static_cast<int>(adj_.size()); }
  std::span<const int> neighbors(int x) const { return adj_[x]; }
  int degree(int x) const { return static_cast<int>(adj_[x].size()); }

  bool is_regular() const;
  bool is_simple() const;
  bool is_connected() const;
  std::size_t edge_count() const;

 private:
  int q_ = 0;
  std::vector<std::vector<int>> adj_;
};

/// Simple connected (q+1)-regular graph from the configuration model,
/// resampling on self-loops, multi-edges or disconnection. Deterministic in
/// `seed`. Throws std::invalid_argument when (q+1)k is odd or k <= q+1 and
/// std::runtime_error after `max_resamples` rejected pairings.
Graph random_regular(int k, int q, std::uint64_t seed, int max_resamples = 1000);

Graph complete_graph(int k);
Graph cycle_graph(int k);
/// Complete bipartite graph K_{q+1,q+1}.
Graph complete_bipartite(int q);
/// Ball of radius `radius` in the (q+1)-regular tree, center 0, BFS order.
Graph tree_ball(int q, int radius);

/// Plain-text format: first line "k q", then k lines of neighbor indices.
Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
Graph load_graph(const std::filesystem::path& path);

/// BFS distances from `source`; vertices beyond `max_depth` get -1.
std::vector<int> bfs_distances(const Graph& g, int source,
                               int max_depth = std::numeric_limits<int>::max());

/// Largest rho such that the ball B(x, rho), made of the edges explored by a
/// BFS to depth rho, is a tree. Cycles are detected as a second route to an
/// already reached vertex. On a finite tree this is the eccentricity of x.
/// Result is capped at `cap`.
int injectivity_radius(const Graph& g, int x, int cap = std::numeric_limits<int>::max());

std::vector<int> injectivity_radii(const Graph& g, int cap);

struct BstProfile {
  int k = 0;
  /// counts[R-1] = |{x : rho(x) < R}| for R = 1..R_max
  std::vector<int> counts;

  int r_max() const { return static_cast<int>(counts.size()); }
  int count(int R) const { return counts.at(R - 1); }
  double alpha(int R) const { return static_cast<double>(count(R)) / k; }
};

BstProfile bst_profile(const Graph& g, int r_max);

/// Diagnostics for graphs used in experiments: q >= 2, regularity,
/// simplicity and connectivity. Empty when the graph is acceptable.
std::vector<std::string> validate_experiment_graph(const Graph& g);

}  // namespace ergolab::graph

#endif  // ERGOLAB_GRAPH_HPP
