#include "ergolab/sphere_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "ergolab/spectral_core.hpp"

namespace ergolab::sphere {

namespace {

// Weights C_ij = (1/T) sum_{n=1..T} P_{2n}(lambda_i/2) P_{2n}(lambda_j/2).
Eigen::MatrixXd time_average_weights(const Eigen::VectorXd& values, int T) {
  const int d = static_cast<int>(values.size());
  Eigen::MatrixXd p(d, T);
  for (int i = 0; i < d; ++i)
    for (int n = 1; n <= T; ++n) p(i, n - 1) = spectral::chebyshev_first(2 * n, values[i] / 2.0);
  return p * p.transpose() / static_cast<double>(T);
}

}  // namespace

Eigen::MatrixXcd tq_on_hs(int s, const RotationSet& rots) {
  if (s < 0) throw std::invalid_argument("tq_on_hs: negative degree");
  const int d = 2 * s + 1;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(d, d);
  for (const Mat3& g : rots.generators()) {
    const Eigen::MatrixXcd dg = wigner_D(s, g);
    t += dg + dg.adjoint();
  }
  return t / std::sqrt(static_cast<double>(rots.q()));
}

JointBasis joint_basis_from_matrix(int s, int q, const Eigen::MatrixXcd& tq) {
  if (tq.rows() != 2 * s + 1 || tq.cols() != 2 * s + 1)
    throw std::invalid_argument("joint_basis: matrix size does not match 2s+1");
  const Eigen::MatrixXcd herm = 0.5 * (tq + tq.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) throw std::runtime_error("joint_basis: eigensolver failed at s = " + std::to_string(s));
  JointBasis jb;
  jb.s = s;
  jb.q = q;
  jb.values = es.eigenvalues();
  jb.vectors = es.eigenvectors();
  const double band = spectral::trivial_eigenvalue(q) + 1e-8;
  if (jb.values.cwiseAbs().maxCoeff() > band)
    throw std::runtime_error("joint_basis: eigenvalue outside the spectral band at s = " + std::to_string(s));
  return jb;
}

JointBasis joint_basis(int s, const RotationSet& rots) {
  return joint_basis_from_matrix(s, rots.q(), tq_on_hs(s, rots));
}

Eigen::VectorXcd sphere_diagonal_elements(const JointBasis& jb, const Eigen::MatrixXcd& m) {
  if (m.rows() != jb.dim() || m.cols() != jb.dim())
    throw std::invalid_argument("sphere_diagonal_elements: matrix size mismatch");
  return (jb.vectors.adjoint() * m * jb.vectors).diagonal();
}

double quantum_variance_sphere(const JointBasis& jb, const Eigen::MatrixXcd& m) {
  return sphere_diagonal_elements(jb, m).cwiseAbs2().sum() / jb.dim();
}

double quantum_variance_sphere(int s, const RotationSet& rots, const SphereFunction& a) {
  if (!a.is_mean_zero()) throw std::invalid_argument("quantum_variance_sphere: test function must have mean zero");
  const HarmonicSpace space(s, a.band().value_or(0));
  return quantum_variance_sphere(joint_basis(s, rots), matrix_element_operator(space, a));
}

WindowVariance variance_in_window(const JointBasis& jb, const Eigen::MatrixXcd& m, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("variance_in_window: empty interval bounds");
  const Eigen::VectorXcd diag = sphere_diagonal_elements(jb, m);
  WindowVariance out;
  double acc = 0.0;
  for (int j = 0; j < jb.dim(); ++j)
    if (jb.values[j] >= lo && jb.values[j] <= hi) {
      ++out.count;
      acc += std::norm(diag[j]);
    }
  if (out.count > 0) out.variance = acc / out.count;
  return out;
}

std::vector<KestenMcKayRow> kesten_mckay_empirical(const std::vector<int>& s_list, const RotationSet& rots,
                                                   double lo, double hi) {
  std::vector<KestenMcKayRow> rows;
  const double target = spectral::plancherel_mass(rots.q(), lo, hi);
  for (int s : s_list) {
    const Eigen::MatrixXcd t = tq_on_hs(s, rots);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (t + t.adjoint()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("kesten_mckay_empirical: eigensolver failed");
    KestenMcKayRow row;
    row.s = s;
    row.dim = 2 * s + 1;
    for (int j = 0; j < row.dim; ++j)
      if (es.eigenvalues()[j] >= lo && es.eigenvalues()[j] <= hi) ++row.count;
    row.ratio = static_cast<double>(row.count) / row.dim;
    row.target = target;
    rows.push_back(row);
  }
  return rows;
}

double moment_trace(const Eigen::MatrixXcd& tq, int n) {
  if (n < 0) throw std::invalid_argument("moment_trace: negative power");
  if (n == 0) return static_cast<double>(tq.rows());
  Eigen::MatrixXcd p = tq;
  for (int k = 1; k < n; ++k) p = p * tq;
  return p.trace().real();
}

double moment_trace(int s, const RotationSet& rots, int n) { return moment_trace(tq_on_hs(s, rots), n); }

double sphere_gap(const JointBasis& jb) {
  if (jb.s < 1) throw std::invalid_argument("sphere_gap: H_0 holds only the trivial eigenvalue");
  return spectral::gap_from_lambda_star(jb.values.cwiseAbs().maxCoeff(), jb.q);
}

double band_gap(const RotationSet& rots, const std::vector<int>& degrees) {
  if (degrees.empty()) throw std::invalid_argument("band_gap: no degrees");
  double gap = std::numeric_limits<double>::infinity();
  for (int s : degrees) gap = std::min(gap, sphere_gap(joint_basis(s, rots)));
  return gap;
}

Eigen::MatrixXcd time_averaged_matrix(const Eigen::MatrixXcd& tq, const Eigen::MatrixXcd& m, int T) {
  if (T < 1) throw std::invalid_argument("time_averaged_matrix: need T >= 1");
  const int d = static_cast<int>(tq.rows());
  // P_k(tq/2) via P_{k+1} = tq P_k - P_{k-1}
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd cur = 0.5 * tq;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 2; k <= 2 * T; ++k) {
    Eigen::MatrixXcd next = tq * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) acc += cur * m * cur;
  }
  return acc / static_cast<double>(T);
}

double time_averaged_hs_norm(const JointBasis& jb, const Eigen::MatrixXcd& m, int T) {
  if (T < 1) throw std::invalid_argument("time_averaged_hs_norm: need T >= 1");
  const Eigen::MatrixXcd mv = jb.vectors.adjoint() * m * jb.vectors;
  const Eigen::MatrixXd c = time_average_weights(jb.values, T);
  return std::sqrt((mv.cwiseAbs2().array() * c.array().square()).sum());
}

Eigen::MatrixXcd zonal_convolution_matrix(int s_kernel, int s_target) {
  if (s_kernel < 0 || s_target < 0) throw std::invalid_argument("zonal_convolution_matrix: negative degree");
  const HarmonicSpace target(s_target);
  const int total = s_kernel + s_target;
  const QuadratureGrid inner = make_grid(total / 2 + 1, total + 1);
  std::vector<Vec3> ys;
  std::vector<double> wy;
  for (int i = 0; i < inner.n_theta(); ++i)
    for (int j = 0; j < inner.n_phi(); ++j) {
      ys.push_back(spherical_to_cartesian(inner.theta[i], inner.phi[j]));
      wy.push_back(inner.weights[i] * inner.phi_weight);
    }
  const int d = 2 * s_target + 1;
  Eigen::MatrixXcd samples(ys.size(), d);  // Y^m at the inner nodes
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const auto [t, p] = cartesian_to_spherical(ys[k]);
    for (int m = -s_target; m <= s_target; ++m) samples(k, m + s_target) = ylm(s_target, m, t, p);
  }
  Eigen::MatrixXcd out(d, d);
  for (int m = -s_target; m <= s_target; ++m) {
    const auto convolved = [&](double theta, double phi) {
      const Vec3 z = spherical_to_cartesian(theta, phi);
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < ys.size(); ++k) acc += wy[k] * zonal(s_kernel, z, ys[k]) * samples(k, m + s_target);
      return acc;
    };
    out.col(m + s_target) = target.project(convolved);
  }
  return out;
}

}  // namespace ergolab::sphere
