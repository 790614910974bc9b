#include "ergolab/s_operator.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ergolab::graph {

double kernel_coefficient(int q, int n, int j, int k) {
  if (j < 0 || k < 0 || j > n || k > n) return 0.0;
  const double scale = 1.0 / (4.0 * std::pow(static_cast<double>(q), 2 * n));
  const double side = 1.0 - q;
  if (n == 0) return 1.0;  // P_0 a P_0 = a
  if (j == n && k == n) return scale;
  if (j == n || k == n) return side * scale;
  return side * side * scale;
}

Eigen::VectorXd kernel_row_from_level_sets(const Graph& g, const Eigen::VectorXd& a, int n, int x) {
  if (n < 0) throw std::invalid_argument("kernel_row_from_level_sets: negative n");
  Eigen::VectorXd row = Eigen::VectorXd::Zero(g.size());
  const auto from_x = bfs_distances(g, x, 2 * n);
  for (int z = 0; z < g.size(); ++z) {
    const int dxz = from_x[z];
    if (dxz < 0 || dxz % 2 != 0) continue;
    const auto from_z = bfs_distances(g, z, 2 * n);
    for (int y = 0; y < g.size(); ++y) {
      const int dzy = from_z[y];
      if (dzy < 0 || dzy % 2 != 0) continue;
      row[y] += kernel_coefficient(g.q(), n, dxz / 2, dzy / 2) * a[z];
    }
  }
  return row;
}

namespace {

// BFS tree of depth `depth` from x; valid as a lift when rho(x) >= depth.
struct LocalTree {
  std::vector<int> vertices;  // in BFS order
  std::vector<int> depth;     // indexed by graph vertex, -1 outside
  std::vector<int> parent;    // indexed by graph vertex
};

LocalTree local_tree(const Graph& g, int x, int depth) {
  LocalTree t;
  t.depth.assign(g.size(), -1);
  t.parent.assign(g.size(), -1);
  std::queue<int> frontier;
  t.depth[x] = 0;
  frontier.push(x);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    t.vertices.push_back(v);
    if (t.depth[v] == depth) continue;
    for (int w : g.neighbors(v))
      if (t.depth[w] < 0) {
        t.depth[w] = t.depth[v] + 1;
        t.parent[w] = v;
        frontier.push(w);
      }
  }
  return t;
}

int tree_distance(const LocalTree& t, int u, int v) {
  int d = 0;
  while (t.depth[u] > t.depth[v]) { u = t.parent[u]; ++d; }
  while (t.depth[v] > t.depth[u]) { v = t.parent[v]; ++d; }
  while (u != v) {
    u = t.parent[u];
    v = t.parent[v];
    d += 2;
  }
  return d;
}

}  // namespace

Eigen::MatrixXd build_S_operator(const Graph& g, const Eigen::VectorXd& a, int j, int k, int l, int T) {
  if (j < 0 || k < 0 || l < 0 || j > T || k > T)
    throw std::invalid_argument("build_S_operator: need 0 <= j, k <= T and l >= 0");
  if (a.size() != g.size()) throw std::invalid_argument("build_S_operator: observable length mismatch");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g.size(), g.size());
  if (l > j + k || l < std::abs(j - k)) return s;  // empty level sets
  const auto rho = injectivity_radii(g, 4 * T + 1);
  for (int x = 0; x < g.size(); ++x) {
    if (rho[x] <= 4 * T) continue;
    const LocalTree t = local_tree(g, x, 4 * T);
    std::vector<int> ys, zs;
    for (int v : t.vertices) {
      if (t.depth[v] == 2 * l) ys.push_back(v);
      if (t.depth[v] == 2 * j) zs.push_back(v);
    }
    for (int y : ys) {
      double acc = 0.0;
      for (int z : zs)
        if (tree_distance(t, z, y) == 2 * k) acc += a[z];
      s(x, y) = acc;
    }
  }
  return s;
}

double hs_inner(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& m2) {
  return m1.cwiseProduct(m2).sum();
}

}  // namespace ergolab::graph
