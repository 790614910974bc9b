#include "ergolab/arc_graph.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace ergolab::graph {

ArcGraph::ArcGraph(const Graph& g) : vertex_count_(g.size()) {
  std::vector<int> offset(g.size() + 1, 0);
  for (int x = 0; x < g.size(); ++x) offset[x + 1] = offset[x] + g.degree(x);
  const int arcs = offset.back();
  source_.resize(arcs);
  target_.resize(arcs);
  reversal_.assign(arcs, -1);

  // occurrence index of each slot among equal neighbors, for pairing multi-edges
  std::vector<int> occurrence(arcs);
  for (int x = 0; x < g.size(); ++x) {
    std::map<int, int> seen;
    const auto nb = g.neighbors(x);
    for (int i = 0; i < static_cast<int>(nb.size()); ++i) {
      const int a = offset[x] + i;
      source_[a] = x;
      target_[a] = nb[i];
      occurrence[a] = seen[nb[i]]++;
    }
  }
  for (int x = 0; x < g.size(); ++x) {
    std::map<std::pair<int, int>, int> slot_of;  // (neighbor, occurrence) -> arc
    for (int i = 0; i < g.degree(x); ++i) {
      const int a = offset[x] + i;
      slot_of[{target_[a], occurrence[a]}] = a;
    }
    for (int i = 0; i < g.degree(x); ++i) {
      const int a = offset[x] + i;
      const int y = target_[a];
      if (y == x) {
        // a self-loop occupies two consecutive occurrences that reverse each other
        const int partner = occurrence[a] ^ 1;
        const auto it = slot_of.find({x, partner});
        if (it == slot_of.end()) throw std::invalid_argument("ArcGraph: unpaired self-loop");
        reversal_[a] = it->second;
      } else {
        const auto nb = g.neighbors(y);
        int seen = 0, match = -1;
        for (int j = 0; j < static_cast<int>(nb.size()); ++j)
          if (nb[j] == x && seen++ == occurrence[a]) {
            match = offset[y] + j;
            break;
          }
        if (match < 0) throw std::invalid_argument("ArcGraph: adjacency is not symmetric");
        reversal_[a] = match;
      }
    }
  }

  succ_offsets_.assign(arcs + 1, 0);
  for (int a = 0; a < arcs; ++a) {
    const int v = target_[a];
    succ_offsets_[a + 1] = succ_offsets_[a] + (offset[v + 1] - offset[v]) - 1;
  }
  succ_.resize(succ_offsets_.back());
  std::vector<int> pred_count(arcs, 0);
  for (int a = 0; a < arcs; ++a) {
    int pos = succ_offsets_[a];
    const int v = target_[a];
    for (int b = offset[v]; b < offset[v + 1]; ++b)
      if (b != reversal_[a]) {
        succ_[pos++] = b;
        ++pred_count[b];
      }
  }
  pred_offsets_.assign(arcs + 1, 0);
  for (int b = 0; b < arcs; ++b) pred_offsets_[b + 1] = pred_offsets_[b] + pred_count[b];
  pred_.resize(pred_offsets_.back());
  std::vector<int> fill(pred_offsets_.begin(), pred_offsets_.end() - 1);
  for (int a = 0; a < arcs; ++a)
    for (int b : successors(a)) pred_[fill[b]++] = a;
}

std::span<const int> ArcGraph::successors(int a) const {
  return {succ_.data() + succ_offsets_[a], succ_.data() + succ_offsets_[a + 1]};
}

std::span<const int> ArcGraph::predecessors(int a) const {
  return {pred_.data() + pred_offsets_[a], pred_.data() + pred_offsets_[a + 1]};
}

ArcGraph arc_graph(const Graph& g) { return ArcGraph(g); }

Eigen::VectorXd nb_operator_apply(const ArcGraph& ag, int q, const Eigen::VectorXd& f) {
  if (f.size() != ag.size()) throw std::invalid_argument("nb_operator_apply: length mismatch");
  Eigen::VectorXd out(ag.size());
  for (int a = 0; a < ag.size(); ++a) {
    double acc = 0.0;
    for (int b : ag.successors(a)) acc += f[b];
    out[a] = acc / q;
  }
  return out;
}

Eigen::VectorXd nb_operator_adjoint_apply(const ArcGraph& ag, int q, const Eigen::VectorXd& f) {
  if (f.size() != ag.size()) throw std::invalid_argument("nb_operator_adjoint_apply: length mismatch");
  Eigen::VectorXd out(ag.size());
  for (int b = 0; b < ag.size(); ++b) {
    double acc = 0.0;
    for (int a : ag.predecessors(b)) acc += f[a];
    out[b] = acc / q;
  }
  return out;
}

Eigen::MatrixXd nb_operator_matrix(const ArcGraph& ag, int q) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ag.size(), ag.size());
  for (int a = 0; a < ag.size(); ++a)
    for (int b : ag.successors(a)) m(a, b) += 1.0 / q;
  return m;
}

Eigen::VectorXd lift_begin(const ArcGraph& ag, const Eigen::VectorXd& f) {
  Eigen::VectorXd out(ag.size());
  for (int a = 0; a < ag.size(); ++a) out[a] = f[ag.source(a)];
  return out;
}

Eigen::VectorXd lift_end(const ArcGraph& ag, const Eigen::VectorXd& f) {
  Eigen::VectorXd out(ag.size());
  for (int a = 0; a < ag.size(); ++a) out[a] = f[ag.target(a)];
  return out;
}

namespace {

// Orthonormal basis of span{B1, E1}.
std::vector<Eigen::VectorXd> trivial_arc_span(const ArcGraph& ag) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ag.vertex_count());
  std::vector<Eigen::VectorXd> basis;
  for (const Eigen::VectorXd& v : {lift_begin(ag, ones), lift_end(ag, ones)}) {
    Eigen::VectorXd w = v;
    for (const auto& b : basis) w -= b.dot(w) * b;
    if (w.norm() > 1e-10 * v.norm()) basis.push_back(w.normalized());
  }
  return basis;
}

void project_out(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& basis) {
  for (const auto& b : basis) v -= b.dot(v) * b;
}

}  // namespace

std::vector<double> nb_norm_decay(const ArcGraph& ag, int q, int kmax, const DecayOptions& opts) {
  if (kmax < 0) throw std::invalid_argument("nb_norm_decay: kmax must be >= 0");
  const auto trivial = trivial_arc_span(ag);
  std::vector<double> norms{1.0};
  if (ag.size() == 0) return norms;

  // fixed, seed-free starting vector
  Eigen::VectorXd start(ag.size());
  for (int a = 0; a < ag.size(); ++a) start[a] = std::sin(1.0 + 0.7548776662466927 * a) + 0.1;
  project_out(start, trivial);
  start.normalize();

  for (int k = 1; k <= kmax; ++k) {
    Eigen::VectorXd v = start;
    double sigma2 = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      Eigen::VectorXd w = v;
      for (int j = 0; j < k; ++j) w = nb_operator_apply(ag, q, w);
      project_out(w, trivial);
      const double estimate = w.squaredNorm();
      for (int j = 0; j < k; ++j) w = nb_operator_adjoint_apply(ag, q, w);
      project_out(w, trivial);
      const double len = w.norm();
      if (len == 0.0) {
        sigma2 = 0.0;
        break;
      }
      v = w / len;
      const bool converged = std::abs(estimate - sigma2) <= opts.tolerance * estimate;
      sigma2 = estimate;
      if (converged) break;
    }
    norms.push_back(std::sqrt(sigma2));
  }
  return norms;
}

double decay_slope(const std::vector<double>& norms) {
  if (norms.size() < 3) throw std::invalid_argument("decay_slope: need norms for k = 1 and k = 2 at least");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(norms.size() - 1);
  for (std::size_t k = 1; k < norms.size(); ++k) {
    if (!(norms[k] > 0.0)) throw std::invalid_argument("decay_slope: nonpositive norm at k = " + std::to_string(k));
    const double x = static_cast<double>(k), y = std::log(norms[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ergolab::graph
