#include "ergolab/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ergolab::sphere {

namespace {

constexpr double kPi = std::numbers::pi;

void check_x(double x, const char* who) {
  if (!(std::abs(x) <= 1.0)) throw std::domain_error(std::string(who) + ": argument outside [-1, 1]");
}

double sign_pow(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// Normalized p_m^m(x) and the chain up to degree s for fixed m.
double normalized_chain(int s, int m, double x) {
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_t;
  if (s == m) return pmm;
  double prev = pmm;
  double cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
  for (int l = m + 2; l <= s; ++l) {
    const double a_l = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
    const double lm1 = l - 1.0;
    const double b = std::sqrt((lm1 * lm1 - static_cast<double>(m) * m) / (4.0 * lm1 * lm1 - 1.0));
    const double next = a_l * (x * cur - b * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double legendre(int s, double x) {
  if (s < 0) throw std::domain_error("legendre: negative degree");
  check_x(x, "legendre");
  if (s == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int l = 1; l < s; ++l) {
    const double next = ((2.0 * l + 1.0) * x * cur - l * prev) / (l + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double assoc_legendre(int s, int m, double x) {
  if (m < 0 || m > s) throw std::domain_error("assoc_legendre: need 0 <= m <= s");
  check_x(x, "assoc_legendre");
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - x * x));
  double pmm = 1.0;
  for (int k = 1; k <= m; ++k) pmm *= -(2.0 * k - 1.0) * sin_t;
  if (s == m) return pmm;
  double prev = pmm;
  double cur = (2.0 * m + 1.0) * x * pmm;
  for (int l = m + 2; l <= s; ++l) {
    const double next = ((2.0 * l - 1.0) * x * cur - (l + m - 1.0) * prev) / (l - m);
    prev = cur;
    cur = next;
  }
  return cur;
}

double normalized_assoc_legendre(int s, int m, double x) {
  if (m < 0 || m > s) throw std::domain_error("normalized_assoc_legendre: need 0 <= m <= s");
  check_x(x, "normalized_assoc_legendre");
  return normalized_chain(s, m, x);
}

std::vector<double> normalized_legendre_row(int s, double x) {
  if (s < 0) throw std::domain_error("normalized_legendre_row: negative degree");
  check_x(x, "normalized_legendre_row");
  std::vector<double> row(s + 1);
  for (int m = 0; m <= s; ++m) row[m] = normalized_chain(s, m, x);
  return row;
}

cplx ylm(int s, int m, double theta, double phi) {
  if (s < 0 || std::abs(m) > s) throw std::domain_error("ylm: need |m| <= s");
  const int am = std::abs(m);
  // Y_s^m for m >= 0 carries (-1)^m on top of the phase inside L_s^m;
  // Y_s^{-m} = (-1)^m conj(Y_s^m) has theta part equal to that of Y_s^m times (-1)^m.
  double part = sign_pow(am) * normalized_chain(s, am, std::cos(theta));
  if (m < 0) part *= sign_pow(am);
  return part * std::polar(1.0, m * phi);
}

double zonal(int s, const Vec3& z, const Vec3& y) {
  const double c = std::clamp(z.dot(y), -1.0, 1.0);
  return (2.0 * s + 1.0) / (4.0 * kPi) * legendre(s, c);
}

Vec3 spherical_to_cartesian(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::pair<double, double> cartesian_to_spherical(const Vec3& v) {
  const double r = v.norm();
  if (r == 0.0) throw std::domain_error("cartesian_to_spherical: zero vector");
  return {std::atan2(std::hypot(v.x(), v.y()), v.z()), std::atan2(v.y(), v.x())};
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int l = 1; l < n; ++l) {
        const double p2 = ((2.0 * l + 1.0) * z * p1 - l * p0) / (l + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // one more derivative evaluation at the converged node
    double p0 = 1.0, p1 = z;
    for (int l = 1; l < n; ++l) {
      const double p2 = ((2.0 * l + 1.0) * z * p1 - l * p0) / (l + 1.0);
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = wt;
    w[n - 1 - i] = wt;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {x, w};
}

QuadratureGrid make_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("make_grid: empty grid");
  QuadratureGrid g;
  auto [nodes, weights] = gauss_legendre(n_theta);
  g.theta.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) g.theta[i] = std::acos(std::clamp(nodes[i], -1.0, 1.0));
  g.weights = std::move(weights);
  g.phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) g.phi[j] = 2.0 * kPi * j / n_phi;
  g.phi_weight = 2.0 * kPi / n_phi;
  return g;
}

// ---- SphereFunction ----

SphereFunction SphereFunction::expansion(std::vector<HarmonicTerm> terms) {
  for (const auto& t : terms)
    if (t.l < 0 || std::abs(t.m) > t.l) throw std::invalid_argument("SphereFunction: term with |m| > l");
  SphereFunction f;
  f.terms_ = std::move(terms);
  return f;
}

SphereFunction SphereFunction::pointwise(std::function<cplx(double, double)> h, double sup_bound) {
  if (!h) throw std::invalid_argument("SphereFunction: empty handle");
  if (!(sup_bound >= 0.0)) throw std::invalid_argument("SphereFunction: sup bound must be >= 0");
  SphereFunction f;
  f.handle_ = std::move(h);
  f.sup_ = sup_bound;
  return f;
}

cplx SphereFunction::operator()(double theta, double phi) const {
  if (handle_) return handle_(theta, phi);
  cplx acc{0.0, 0.0};
  for (const auto& t : terms_) acc += t.coef * ylm(t.l, t.m, theta, phi);
  return acc;
}

std::optional<int> SphereFunction::band() const {
  if (handle_) return std::nullopt;
  int b = 0;
  for (const auto& t : terms_) b = std::max(b, t.l);
  return b;
}

double SphereFunction::sup_bound() const {
  if (handle_) return sup_;
  double acc = 0.0;
  for (const auto& t : terms_) acc += std::abs(t.coef) * std::sqrt((2.0 * t.l + 1.0) / (4.0 * kPi));
  return acc;
}

bool SphereFunction::is_mean_zero(double tol) const {
  if (!handle_) {
    cplx c00{0.0, 0.0};
    for (const auto& t : terms_)
      if (t.l == 0) c00 += t.coef;
    return std::abs(c00) <= tol;
  }
  const QuadratureGrid g = make_grid(64, 129);
  cplx acc{0.0, 0.0};
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) acc += g.weights[i] * g.phi_weight * handle_(g.theta[i], g.phi[j]);
  return std::abs(acc) <= tol * std::max(1.0, 4.0 * kPi * sup_);
}

double SphereFunction::l2_norm_squared() const {
  if (!handle_) {
    // merge duplicate (l, m) terms; distinct harmonics are orthonormal
    std::vector<HarmonicTerm> merged;
    for (const auto& t : terms_) {
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const HarmonicTerm& u) { return u.l == t.l && u.m == t.m; });
      if (it == merged.end()) merged.push_back(t);
      else it->coef += t.coef;
    }
    double acc = 0.0;
    for (const auto& t : merged) acc += std::norm(t.coef);
    return acc;
  }
  const QuadratureGrid g = make_grid(64, 129);
  double acc = 0.0;
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) acc += g.weights[i] * g.phi_weight * std::norm(handle_(g.theta[i], g.phi[j]));
  return acc;
}

std::vector<HarmonicTerm> real_harmonic(int l, int m, double coef) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("real_harmonic: need |m| <= l");
  if (m == 0) return {{l, 0, cplx(coef, 0.0)}};
  const int am = std::abs(m);
  const double s = sign_pow(am);
  const double r = coef / std::sqrt(2.0);
  // Re Y^m = (Y^m + (-1)^m Y^{-m}) / 2, Im Y^m = (Y^m - (-1)^m Y^{-m}) / (2i)
  if (m > 0) return {{l, am, cplx(r, 0.0)}, {l, -am, cplx(s * r, 0.0)}};
  return {{l, am, cplx(0.0, -r)}, {l, -am, cplx(0.0, s * r)}};
}

// ---- HarmonicSpace ----

HarmonicSpace::HarmonicSpace(int s, int margin) : s_(s), margin_(margin) {
  if (s < 0) throw std::invalid_argument("HarmonicSpace: negative degree");
  if (margin < 0) throw std::invalid_argument("HarmonicSpace: negative margin");
  const int n_theta = (4 * s + margin + 2 + 1) / 2;
  const int n_phi = 4 * s + 2 * margin + 1;
  grid_ = make_grid(n_theta, n_phi);
  table_.resize(n_theta, 2 * s + 1);
  for (int i = 0; i < n_theta; ++i) {
    const auto row = normalized_legendre_row(s, std::cos(grid_.theta[i]));
    for (int m = 0; m <= s; ++m) {
      const double part = sign_pow(m) * row[m];
      table_(i, s + m) = part;
      table_(i, s - m) = sign_pow(m) * part;
    }
  }
}

Eigen::VectorXcd HarmonicSpace::project(const std::function<cplx(double, double)>& f) const {
  const int nt = grid_.n_theta(), np = grid_.n_phi(), d = dim();
  // e^{-i m phi_j} for m = -s..s
  Eigen::MatrixXcd phase(d, np);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < np; ++j) phase(k, j) = std::polar(1.0, -(k - s_) * grid_.phi[j]);
  Eigen::VectorXcd coeffs = Eigen::VectorXcd::Zero(d);
  Eigen::VectorXcd samples(np);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) samples[j] = f(grid_.theta[i], grid_.phi[j]);
    const Eigen::VectorXcd fourier = phase * samples;
    for (int k = 0; k < d; ++k) coeffs[k] += grid_.weights[i] * grid_.phi_weight * table_(i, k) * fourier[k];
  }
  return coeffs;
}

cplx HarmonicSpace::evaluate(const Eigen::VectorXcd& coeffs, double theta, double phi) const {
  if (coeffs.size() != dim()) throw std::invalid_argument("HarmonicSpace::evaluate: coefficient length mismatch");
  const auto row = normalized_legendre_row(s_, std::cos(theta));
  cplx acc{0.0, 0.0};
  for (int m = -s_; m <= s_; ++m) {
    const int am = std::abs(m);
    double part = sign_pow(am) * row[am];
    if (m < 0) part *= sign_pow(am);
    acc += coeffs[m + s_] * part * std::polar(1.0, m * phi);
  }
  return acc;
}

Eigen::MatrixXcd HarmonicSpace::gram() const {
  Eigen::MatrixXcd g(dim(), dim());
  for (int mp = -s_; mp <= s_; ++mp) g.col(mp + s_) = project([&](double t, double p) { return ylm(s_, mp, t, p); });
  return g;
}

Eigen::MatrixXcd matrix_element_operator(const HarmonicSpace& space, const SphereFunction& a) {
  if (auto b = a.band(); b && *b > space.margin())
    throw std::invalid_argument("matrix_element_operator: test function degree " + std::to_string(*b) +
                                " exceeds quadrature margin " + std::to_string(space.margin()));
  const auto& grid = space.grid();
  const int s = space.degree(), d = space.dim();
  const int nt = grid.n_theta(), np = grid.n_phi();
  const int kmax = 2 * s;
  // e^{-i k phi_j} for k = -2s..2s
  Eigen::MatrixXcd phase(2 * kmax + 1, np);
  for (int k = -kmax; k <= kmax; ++k)
    for (int j = 0; j < np; ++j) phase(k + kmax, j) = std::polar(1.0, -k * grid.phi[j]);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXcd samples(np);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) samples[j] = a(grid.theta[i], grid.phi[j]);
    const Eigen::VectorXcd fourier = (phase * samples) / static_cast<double>(np);
    const double w = 2.0 * kPi * grid.weights[i];
    for (int r = 0; r < d; ++r) {
      const double tr = w * space.theta_part(i, r - s);
      if (tr == 0.0) continue;
      for (int c = 0; c < d; ++c) m(r, c) += tr * space.theta_part(i, c - s) * fourier[r - c + kmax];
    }
  }
  return m;
}

}  // namespace ergolab::sphere
