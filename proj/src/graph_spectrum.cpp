#include "ergolab/graph_spectrum.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ergolab/spectral_core.hpp"

namespace ergolab::graph {

bool Observable::is_admissible(double tol) const {
  return std::abs(values.sum()) <= tol && sup_norm() <= 1.0 + tol;
}

Observable Observable::random_mean_zero(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd v(k);
  for (int i = 0; i < k; ++i) v[i] = unif(rng);
  v.array() -= v.mean();
  const double sup = v.cwiseAbs().maxCoeff();
  if (sup > 1.0) v /= sup;
  return {v};
}

Observable Observable::half_split(int k) {
  if (k % 2 != 0) throw std::invalid_argument("half_split: k must be even");
  Eigen::VectorXd v(k);
  v.head(k / 2).setOnes();
  v.tail(k / 2).setConstant(-1.0);
  return {v};
}

Eigen::VectorXd tq_apply(const Graph& g, const Eigen::VectorXd& v) {
  if (v.size() != g.size()) throw std::invalid_argument("tq_apply: length mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.q()));
  Eigen::VectorXd out(g.size());
  for (int x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    for (int y : g.neighbors(x)) acc += v[y];
    out[x] = scale * acc;
  }
  return out;
}

Eigen::MatrixXd tq_matrix(const Graph& g) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.q()));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (int x = 0; x < g.size(); ++x)
    for (int y : g.neighbors(x)) m(x, y) += scale;
  return m;
}

namespace {

void check_dense(const Graph& g, int dense_limit) {
  if (g.size() > dense_limit)
    throw std::invalid_argument("graph has " + std::to_string(g.size()) +
                                " vertices, above the dense limit " + std::to_string(dense_limit));
}

}  // namespace

EigenSystem eigensystem(const Graph& g, int dense_limit) {
  check_dense(g, dense_limit);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tq_matrix(g));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensystem: solver failed");
  return {g.q(), solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eigenvalues(const Graph& g, int dense_limit) {
  check_dense(g, dense_limit);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tq_matrix(g), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: solver failed");
  return solver.eigenvalues();
}

double nontrivial_lambda_star(const Eigen::VectorXd& ascending_values) {
  const auto k = ascending_values.size();
  if (k < 2) throw std::invalid_argument("spectral gap undefined for k = 1");
  // ties with the top eigenvalue are broken by index: only the last one is trivial
  return ascending_values.head(k - 1).cwiseAbs().maxCoeff();
}

double spectral_gap(const Eigen::VectorXd& ascending_values, int q) {
  return spectral::gap_from_lambda_star(nontrivial_lambda_star(ascending_values), q);
}

double spectral_gap(const EigenSystem& es) { return spectral_gap(es.values, es.q); }

Eigen::VectorXd diagonal_elements(const EigenSystem& es, const Observable& a) {
  if (a.values.size() != es.size()) throw std::invalid_argument("observable length mismatch");
  return es.vectors.cwiseAbs2().transpose() * a.values;
}

double quantum_variance(const EigenSystem& es, const Observable& a) {
  return diagonal_elements(es, a).squaredNorm() / es.size();
}

Eigen::VectorXd chebyshev_propagate(const Graph& g, int n, const Eigen::VectorXd& v) {
  if (n < 0) throw std::invalid_argument("chebyshev_propagate: negative degree");
  if (n == 0) return v;
  Eigen::VectorXd prev = v;
  Eigen::VectorXd cur = 0.5 * tq_apply(g, v);
  for (int m = 1; m < n; ++m) {
    Eigen::VectorXd next = tq_apply(g, cur) - prev;
    prev.swap(cur);
    cur.swap(next);
  }
  return cur;
}

Eigen::MatrixXd time_averaged_operator(const Graph& g, const Observable& a, int T, int dense_limit) {
  check_dense(g, dense_limit);
  if (T < 1) throw std::invalid_argument("time_averaged_operator: T must be >= 1");
  if (a.values.size() != g.size()) throw std::invalid_argument("observable length mismatch");
  if (!a.is_admissible())
    throw std::invalid_argument("time_averaged_operator: observable must have zero sum and sup <= 1");
  const int k = g.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  std::vector<Eigen::VectorXd> even(T + 1);
  for (int y = 0; y < k; ++y) {
    // P_m(T_q/2) e_y for m = 0..2T, keeping the even ones
    Eigen::VectorXd prev = Eigen::VectorXd::Unit(k, y);
    Eigen::VectorXd cur = 0.5 * tq_apply(g, prev);
    for (int m = 2; m <= 2 * T; ++m) {
      Eigen::VectorXd next = tq_apply(g, cur) - prev;
      prev.swap(cur);
      cur.swap(next);
      if (m % 2 == 0) even[m / 2] = cur;
    }
    for (int n = 1; n <= T; ++n)
      out.col(y) += chebyshev_propagate(g, 2 * n, a.values.cwiseProduct(even[n]));
  }
  return out / T;
}

namespace {

Eigen::MatrixXd weight_matrix(const Eigen::VectorXd& lambda, int T) {
  const auto k = lambda.size();
  Eigen::MatrixXd p(k, T);  // p(i, n-1) = P_{2n}(lambda_i / 2)
  for (Eigen::Index i = 0; i < k; ++i)
    for (int n = 1; n <= T; ++n) p(i, n - 1) = spectral::chebyshev_first(2 * n, lambda[i] / 2.0);
  return p * p.transpose() / T;
}

}  // namespace

Eigen::MatrixXd time_averaged_operator_spectral(const EigenSystem& es, const Observable& a, int T) {
  if (T < 1) throw std::invalid_argument("time_averaged_operator_spectral: T must be >= 1");
  const Eigen::MatrixXd& v = es.vectors;
  const Eigen::MatrixXd inner = v.transpose() * a.values.asDiagonal() * v;
  return v * inner.cwiseProduct(weight_matrix(es.values, T)) * v.transpose();
}

double time_averaged_hs_norm(const EigenSystem& es, const Observable& a, int T) {
  const Eigen::MatrixXd& v = es.vectors;
  const Eigen::MatrixXd inner = v.transpose() * a.values.asDiagonal() * v;
  return inner.cwiseProduct(weight_matrix(es.values, T)).norm();
}

Eigen::MatrixXd restrict_rows_to_injective(const Graph& g, const Eigen::MatrixXd& m, int T) {
  Eigen::MatrixXd out = m;
  const auto rho = injectivity_radii(g, 4 * T + 1);
  for (int x = 0; x < g.size(); ++x)
    if (rho[x] <= 4 * T) out.row(x).setZero();
  return out;
}

double time_average_weight(double lambda, int T) {
  double acc = 0.0;
  for (int n = 1; n <= T; ++n) {
    const double p = spectral::chebyshev_first(2 * n, lambda / 2.0);
    acc += p * p;
  }
  return acc / T;
}

double hs_norm(const Eigen::MatrixXd& m) { return m.norm(); }

}  // namespace ergolab::graph
