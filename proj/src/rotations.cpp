#include "ergolab/rotations.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace ergolab::sphere {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

Eigen::Vector3d vee_of_skew(const Mat3& r) {
  return {r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
}

double parse_number(const std::string& tok) {
  const auto slash = tok.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("trailing characters");
      return v;
    }
    const std::string num = tok.substr(0, slash), den = tok.substr(slash + 1);
    std::size_t used_den = 0;
    const long long p = std::stoll(num, &used);
    const long long q = std::stoll(den, &used_den);
    if (used != num.size() || used_den != den.size()) throw std::invalid_argument("trailing characters");
    if (q == 0) throw std::invalid_argument("zero denominator");
    return static_cast<double>(p) / static_cast<double>(q);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("rotation file: bad number '" + tok + "'");
  }
}

// Eigenvectors of J_x on the spin-s representation, whose eigenvalues are the
// integers -s..s. The tridiagonal matrix is real symmetric, so the vectors
// are real.
struct JxBasis {
  Eigen::MatrixXd vectors;  // column k has J_x eigenvalue mu[k]
  Eigen::VectorXd mu;
};

std::shared_ptr<const JxBasis> jx_basis(int s) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const JxBasis>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(s); it != cache.end()) return it->second;
  }
  const int d = 2 * s + 1;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd off(std::max(d - 1, 0));
  for (int i = 0; i + 1 < d; ++i) {
    const double m = i - s;
    off[i] = 0.5 * std::sqrt((s - m) * (s + m + 1.0));
  }
  auto basis = std::make_shared<JxBasis>();
  if (d == 1) {
    basis->vectors = Eigen::MatrixXd::Ones(1, 1);
    basis->mu = Eigen::VectorXd::Zero(1);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("wigner: J_x eigensolver failed");
    basis->vectors = es.eigenvectors();
    basis->mu = es.eigenvalues().array().round();
  }
  std::lock_guard lock(mutex);
  return cache.emplace(s, std::move(basis)).first->second;
}

}  // namespace

RotationSet::RotationSet(std::vector<Mat3> generators, double tol) : gens_(std::move(generators)) {
  if (gens_.size() < 2) throw std::invalid_argument("RotationSet: need at least two generators");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const Mat3& r = gens_[i];
    if (!r.allFinite()) throw std::invalid_argument("RotationSet: generator " + std::to_string(i) + " is not finite");
    const double orth = (r.transpose() * r - Mat3::Identity()).norm();
    if (orth > tol)
      throw std::invalid_argument("RotationSet: generator " + std::to_string(i) +
                                  " is not orthogonal (deviation " + std::to_string(orth) + ")");
    if (std::abs(r.determinant() - 1.0) > tol)
      throw std::invalid_argument("RotationSet: generator " + std::to_string(i) + " has determinant != 1");
  }
}

RotationSet RotationSet::default_set() {
  Mat3 a, b;
  a << 0.6, -0.8, 0.0,
       0.8, 0.6, 0.0,
       0.0, 0.0, 1.0;
  b << 1.0, 0.0, 0.0,
       0.0, 0.6, -0.8,
       0.0, 0.8, 0.6;
  return RotationSet({a, b});
}

Mat3 RotationSet::letter(int code) const {
  if (code < 0 || code >= 2 * count()) throw std::out_of_range("RotationSet::letter: bad letter");
  const Mat3& g = gens_[code / 2];
  return (code % 2 == 0) ? g : Mat3(g.transpose());
}

RotationSet parse_rotation_set(std::istream& in) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) values.push_back(parse_number(tok));
  }
  if (values.empty() || values.size() % 9 != 0)
    throw std::invalid_argument("rotation file: expected a positive multiple of 9 numbers, got " +
                                std::to_string(values.size()));
  std::vector<Mat3> gens;
  for (std::size_t k = 0; k < values.size(); k += 9) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = values[k + 3 * i + j];
    gens.push_back(r);
  }
  return RotationSet(std::move(gens));
}

RotationSet load_rotation_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rotation file " + path.string());
  return parse_rotation_set(in);
}

Mat3 rot_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rot_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 rotation_about(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

EulerZYZ euler_zyz(const Mat3& r) {
  EulerZYZ e;
  const double sb = std::hypot(r(0, 2), r(1, 2));
  const double cb = r(2, 2);
  e.beta = std::atan2(sb, cb);
  if (sb <= 1e-15) {
    e.gamma = 0.0;
    e.alpha = (cb >= 0.0) ? std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1))
                          : std::atan2(-(r(1, 0) + r(0, 1)), -(r(0, 0) - r(1, 1)));
    return e;
  }
  const double a_col = std::atan2(r(1, 2), r(0, 2));
  const double g_col = std::atan2(r(2, 1), -r(2, 0));
  // alpha + gamma (or alpha - gamma) from the upper block is accurate even when
  // sin(beta) is small; split the correction evenly.
  if (cb >= 0.0) {
    const double sum = std::atan2(r(1, 0) - r(0, 1), r(0, 0) + r(1, 1));
    const double c = wrap_angle(sum - a_col - g_col);
    e.alpha = a_col + 0.5 * c;
    e.gamma = g_col + 0.5 * c;
  } else {
    const double diff = std::atan2(-(r(1, 0) + r(0, 1)), -(r(0, 0) - r(1, 1)));
    const double c = wrap_angle(diff - (a_col - g_col));
    e.alpha = a_col + 0.5 * c;
    e.gamma = g_col - 0.5 * c;
  }
  return e;
}

Mat3 from_euler(const EulerZYZ& e) { return rot_z(e.alpha) * rot_y(e.beta) * rot_z(e.gamma); }

double rotation_angle(const Mat3& r) {
  const double s = 0.5 * vee_of_skew(r).norm();
  const double c = 0.5 * (r.trace() - 1.0);
  return std::atan2(s, c);
}

Eigen::Vector3d rotation_axis(const Mat3& r) {
  const double theta = rotation_angle(r);
  const Eigen::Vector3d v = vee_of_skew(r);
  if (theta < 1e-300 && v.norm() == 0.0) return Eigen::Vector3d::UnitZ();
  if (theta < 0.5 * kPi) return v.normalized();
  const Mat3 b = 0.5 * (r + r.transpose()) - std::cos(theta) * Mat3::Identity();
  int col = 0;
  b.diagonal().maxCoeff(&col);
  Eigen::Vector3d n = b.col(col).normalized();
  if (n.dot(v) < 0.0) n = -n;
  return n;
}

Eigen::MatrixXd wigner_small_d(int s, double beta) {
  if (s < 0) throw std::invalid_argument("wigner_small_d: negative degree");
  const auto basis = jx_basis(s);
  const int d = 2 * s + 1;
  const Eigen::MatrixXd& w = basis->vectors;
  const Eigen::ArrayXd phase = beta * basis->mu.array();
  const Eigen::MatrixXd wc = w * phase.cos().matrix().asDiagonal();
  const Eigen::MatrixXd ws = w * phase.sin().matrix().asDiagonal();
  const Eigen::MatrixXd cos_part = wc * w.transpose();
  const Eigen::MatrixXd sin_part = ws * w.transpose();
  // e^{-i beta J_y} = U e^{-i beta J_x} U^dagger with U = e^{-i pi J_z / 2}, so
  // d_{m'm} = Re[i^{m-m'} sum_k W_{m'k} W_{mk} e^{-i beta mu_k}].
  Eigen::MatrixXd out(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const int delta = ((c - r) % 4 + 4) % 4;  // m - m' mod 4
      switch (delta) {
        case 0: out(r, c) = cos_part(r, c); break;
        case 1: out(r, c) = sin_part(r, c); break;
        case 2: out(r, c) = -cos_part(r, c); break;
        default: out(r, c) = -sin_part(r, c); break;
      }
    }
  return out;
}

Eigen::MatrixXcd wigner_D(int s, const Mat3& r) {
  const EulerZYZ e = euler_zyz(r);
  const Eigen::MatrixXd small = wigner_small_d(s, e.beta);
  const int d = 2 * s + 1;
  Eigen::MatrixXcd out(d, d);
  for (int row = 0; row < d; ++row) {
    const int mp = row - s;
    for (int col = 0; col < d; ++col) {
      const int m = col - s;
      // (-1)^{m+m'} converts the Condon-Shortley basis to the `ylm` basis
      const double sign = ((m + mp) % 2 == 0) ? 1.0 : -1.0;
      out(row, col) = sign * small(row, col) * std::polar(1.0, -(mp * e.alpha + m * e.gamma));
    }
  }
  return out;
}

}  // namespace ergolab::sphere
