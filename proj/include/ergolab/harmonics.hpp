#ifndef ERGOLAB_HARMONICS_HPP
#define ERGOLAB_HARMONICS_HPP

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace ergolab::sphere {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

/// Legendre polynomial L_s(x) by Bonnet's recurrence. Throws std::domain_error
/// for |x| > 1 or s < 0.
double legendre(int s, double x);

/// Associated Legendre function L_s^m(x), 0 <= m <= s, with the
/// Condon-Shortley factor (-1)^m included: L_1^1(cos t) = -sin t.
/// Unnormalized, so it overflows for large m; use the normalized variant there.
double assoc_legendre(int s, int m, double x);

/// sqrt((2s+1)/(4pi) (s-m)!/(s+m)!) L_s^m(x), computed by normalized
/// recurrences that stay finite for large s.
double normalized_assoc_legendre(int s, int m, double x);

/// All normalized values for m = 0..s at one x, in O(s^2).
std::vector<double> normalized_legendre_row(int s, double x);

/// Y_s^m(theta, phi) = (-1)^m sqrt((2s+1)/(4pi) (s-m)!/(s+m)!) L_s^m(cos theta) e^{i m phi}
/// for m >= 0, and Y_s^{-m} = (-1)^m conj(Y_s^m). Throws for |m| > s.
cplx ylm(int s, int m, double theta, double phi);

/// Zonal harmonic (2s+1)/(4pi) L_s(<z, y>) for unit vectors z, y.
double zonal(int s, const Vec3& z, const Vec3& y);

Vec3 spherical_to_cartesian(double theta, double phi);
/// (theta, phi) with theta in [0, pi], phi in (-pi, pi].
std::pair<double, double> cartesian_to_spherical(const Vec3& v);

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Product grid: Gauss-Legendre in cos(theta) times uniform phi.
/// Integrates band-limited integrands against area measure (total 4pi).
struct QuadratureGrid {
  std::vector<double> theta;    // nodes, from the Gauss-Legendre cos(theta)
  std::vector<double> weights;  // Gauss-Legendre weights
  std::vector<double> phi;      // 2 pi j / n_phi
  double phi_weight = 0.0;      // 2 pi / n_phi

  int n_theta() const { return static_cast<int>(theta.size()); }
  int n_phi() const { return static_cast<int>(phi.size()); }
  std::size_t size() const { return theta.size() * phi.size(); }
};

QuadratureGrid make_grid(int n_theta, int n_phi);

struct HarmonicTerm {
  int l = 0;
  int m = 0;
  cplx coef{0.0, 0.0};
};

/// Test function on the sphere: either a finite spherical-harmonic expansion
/// or a pointwise handle with a stated sup bound.
class SphereFunction {
 public:
  static SphereFunction expansion(std::vector<HarmonicTerm> terms);
  static SphereFunction pointwise(std::function<cplx(double, double)> f, double sup_bound);
  static SphereFunction zero() { return expansion({}); }

  cplx operator()(double theta, double phi) const;

  /// Largest degree of an expansion; empty for pointwise functions.
  std::optional<int> band() const;
  const std::vector<HarmonicTerm>& terms() const { return terms_; }
  /// Upper bound for |a|: the stated bound, or sum |c| sqrt((2l+1)/(4pi)).
  double sup_bound() const;
  /// Expansions: no l = 0 content. Pointwise: integral by quadrature vanishes.
  bool is_mean_zero(double tol = 1e-10) const;
  /// ||a||_2^2 against area measure (exact for expansions).
  double l2_norm_squared() const;

 private:
  std::vector<HarmonicTerm> terms_;
  std::function<cplx(double, double)> handle_;
  double sup_ = 0.0;
};

/// Real-valued harmonic of degree l: Y_l^0, sqrt(2) Re Y_l^m (m > 0) or
/// sqrt(2) Im Y_l^{|m|} (m < 0), times coef. Unit L2 norm for coef = 1.
std::vector<HarmonicTerm> real_harmonic(int l, int m, double coef = 1.0);

/// Degree-s harmonics with the quadrature grid used for matrix elements.
///
/// The grid has ceil((4s + margin + 2)/2) Gauss-Legendre nodes and
/// 4s + 2 margin + 1 phi nodes, exact for products of two degree-s harmonics
/// with a test function of degree <= margin. Basis index i <-> m = i - s.
class HarmonicSpace {
 public:
  explicit HarmonicSpace(int s, int margin = 0);

  int degree() const { return s_; }
  int dim() const { return 2 * s_ + 1; }
  int margin() const { return margin_; }
  const QuadratureGrid& grid() const { return grid_; }

  /// Theta-part of Y_s^m at grid node i: Y_s^m = theta_part(i, m) e^{i m phi}.
  double theta_part(int i, int m) const { return table_(i, m + s_); }

  /// Coefficients <Y_s^m, f> by quadrature.
  Eigen::VectorXcd project(const std::function<cplx(double, double)>& f) const;
  /// sum_m c_m Y_s^m(theta, phi).
  cplx evaluate(const Eigen::VectorXcd& coeffs, double theta, double phi) const;
  /// Gram matrix of the basis computed from pointwise `ylm` samples.
  Eigen::MatrixXcd gram() const;

 private:
  int s_;
  int margin_;
  QuadratureGrid grid_;
  Eigen::MatrixXd table_;  // n_theta x (2s+1)
};

/// M_{m m'} = <Y_s^m, a Y_s^{m'}> by quadrature on the space's grid.
/// Throws std::invalid_argument when an expansion's degree exceeds the
/// grid margin.
Eigen::MatrixXcd matrix_element_operator(const HarmonicSpace& space, const SphereFunction& a);

}  // namespace ergolab::sphere

#endif  // ERGOLAB_HARMONICS_HPP
