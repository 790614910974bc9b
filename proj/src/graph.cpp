#include "ergolab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ergolab::graph {

Graph::Graph(int q, std::vector<std::vector<int>> adjacency) : q_(q), adj_(std::move(adjacency)) {
  if (q_ < 0) throw std::invalid_argument("Graph: q must be nonnegative");
  const int k = size();
  for (const auto& list : adj_)
    for (int y : list)
      if (y < 0 || y >= k) throw std::invalid_argument("Graph: neighbor index out of range");
}

bool Graph::is_regular() const {
  return std::all_of(adj_.begin(), adj_.end(),
                     [&](const auto& list) { return static_cast<int>(list.size()) == q_ + 1; });
}

bool Graph::is_simple() const {
  for (int x = 0; x < size(); ++x) {
    std::vector<int> sorted(adj_[x].begin(), adj_[x].end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (std::binary_search(sorted.begin(), sorted.end(), x)) return false;
  }
  return true;
}

bool Graph::is_connected() const {
  if (adj_.empty()) return true;
  const auto dist = bfs_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::size_t Graph::edge_count() const {
  std::size_t endpoints = 0;
  for (const auto& list : adj_) endpoints += list.size();
  return endpoints / 2;
}

Graph random_regular(int k, int q, std::uint64_t seed, int max_resamples) {
  if (q < 1) throw std::invalid_argument("random_regular: q must be >= 1");
  const int degree = q + 1;
  if ((static_cast<long long>(degree) * k) % 2 != 0)
    throw std::invalid_argument("random_regular: (q+1)*k must be even");
  if (k <= degree) throw std::invalid_argument("random_regular: need k > q+1");

  std::mt19937_64 rng(seed);
  std::vector<int> stubs(static_cast<std::size_t>(k) * degree);
  for (int x = 0; x < k; ++x)
    std::fill_n(stubs.begin() + static_cast<std::ptrdiff_t>(x) * degree, degree, x);

  for (int attempt = 0; attempt < max_resamples; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<std::vector<int>> adj(k);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
      const int a = stubs[i], b = stubs[i + 1];
      if (a == b || std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) {
        ok = false;
        break;
      }
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    if (!ok) continue;
    for (auto& list : adj) std::sort(list.begin(), list.end());
    Graph g(q, std::move(adj));
    if (g.is_connected()) return g;
  }
  throw std::runtime_error("random_regular: rejection budget exhausted");
}

Graph complete_graph(int k) {
  if (k < 2) throw std::invalid_argument("complete_graph: k must be >= 2");
  std::vector<std::vector<int>> adj(k);
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (x != y) adj[x].push_back(y);
  return Graph(k - 2, std::move(adj));
}

Graph cycle_graph(int k) {
  if (k < 3) throw std::invalid_argument("cycle_graph: k must be >= 3");
  std::vector<std::vector<int>> adj(k);
  for (int x = 0; x < k; ++x) adj[x] = {(x + k - 1) % k, (x + 1) % k};
  return Graph(1, std::move(adj));
}

Graph complete_bipartite(int q) {
  const int side = q + 1;
  std::vector<std::vector<int>> adj(2 * side);
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y) {
      adj[x].push_back(side + y);
      adj[side + y].push_back(x);
    }
  return Graph(q, std::move(adj));
}

Graph tree_ball(int q, int radius) {
  if (q < 1 || radius < 0) throw std::invalid_argument("tree_ball: bad parameters");
  std::vector<std::vector<int>> adj(1);
  std::vector<int> shell{0};
  for (int r = 0; r < radius; ++r) {
    std::vector<int> next;
    for (int x : shell) {
      const int children = r == 0 ? q + 1 : q;
      for (int c = 0; c < children; ++c) {
        const int y = static_cast<int>(adj.size());
        adj.emplace_back();
        adj[x].push_back(y);
        adj[y].push_back(x);
        next.push_back(y);
      }
    }
    shell.swap(next);
  }
  return Graph(q, std::move(adj));
}

Graph read_graph(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("graph file: missing header");
  int k = 0, q = 0;
  {
    std::istringstream header(line);
    if (!(header >> k >> q) || k <= 0 || q < 0)
      throw std::runtime_error("graph file: header must be 'k q'");
  }
  std::vector<std::vector<int>> adj(k);
  for (int x = 0; x < k; ++x) {
    if (!next_line()) throw std::runtime_error("graph file: expected " + std::to_string(k) + " adjacency lines");
    std::istringstream row(line);
    int y;
    while (row >> y) adj[x].push_back(y);
    if (!row.eof()) throw std::runtime_error("graph file: bad token on line for vertex " + std::to_string(x));
    if (static_cast<int>(adj[x].size()) != q + 1)
      throw std::runtime_error("graph file: vertex " + std::to_string(x) + " lists " + std::to_string(adj[x].size()) +
                               " neighbors, expected " + std::to_string(q + 1));
  }
  return Graph(q, std::move(adj));
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.size() << ' ' << g.q() << '\n';
  for (int x = 0; x < g.size(); ++x) {
    const auto nb = g.neighbors(x);
    for (std::size_t i = 0; i < nb.size(); ++i) out << (i ? " " : "") << nb[i];
    out << '\n';
  }
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path.string());
  return read_graph(in);
}

std::vector<int> bfs_distances(const Graph& g, int source, int max_depth) {
  std::vector<int> dist(g.size(), -1);
  std::queue<int> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const int x = frontier.front();
    frontier.pop();
    if (dist[x] >= max_depth) continue;
    for (int y : g.neighbors(x))
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
  }
  return dist;
}

int injectivity_radius(const Graph& g, int x, int cap) {
  // Grow the BFS tree one level at a time. B(x, r) holds the edges explored
  // from vertices at depth < r; a second route to a vertex (another parent, a
  // repeated edge, a self-loop or an edge inside the previous shell) closes a
  // cycle in B(x, r), so the radius is r - 1.
  std::vector<int> depth(g.size(), -1), parent(g.size(), -1);
  std::vector<int> shell{x}, next;
  depth[x] = 0;
  for (int r = 1; r <= cap; ++r) {
    next.clear();
    for (int v : shell) {
      bool parent_edge_used = false;
      for (int y : g.neighbors(v)) {
        if (y == parent[v] && !parent_edge_used) {
          parent_edge_used = true;
          continue;
        }
        if (depth[y] >= 0) return r - 1;
        depth[y] = r;
        parent[y] = v;
        next.push_back(y);
      }
    }
    if (next.empty()) return std::min(r - 1, cap);  // the whole component is a tree
    shell.swap(next);
  }
  return cap;
}

std::vector<int> injectivity_radii(const Graph& g, int cap) {
  std::vector<int> rho(g.size());
  for (int x = 0; x < g.size(); ++x) rho[x] = injectivity_radius(g, x, cap);
  return rho;
}

BstProfile bst_profile(const Graph& g, int r_max) {
  if (r_max < 1) throw std::invalid_argument("bst_profile: r_max must be >= 1");
  BstProfile profile;
  profile.k = g.size();
  profile.counts.assign(r_max, 0);
  // rho(x) < R only depends on rho capped at r_max
  for (int rho : injectivity_radii(g, r_max))
    for (int R = rho + 1; R <= r_max; ++R) ++profile.counts[R - 1];
  return profile;
}

std::vector<std::string> validate_experiment_graph(const Graph& g) {
  std::vector<std::string> diags;
  if (g.q() < 2) diags.push_back("q must be >= 2");
  if (!g.is_regular()) diags.push_back("graph is not (q+1)-regular");
  if (!g.is_simple()) diags.push_back("graph has self-loops or multi-edges");
  if (!g.is_connected()) diags.push_back("graph is not connected");
  return diags;
}

}  // namespace ergolab::graph
