#include "ergolab/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace ergolab::spectral {

double trivial_eigenvalue(int q) {
  return (q + 1) / std::sqrt(static_cast<double>(q));
}

SpectralParam SpectralParam::from_lambda(double lambda) {
  SpectralParam p;
  p.lambda = lambda;
  if (std::abs(lambda) <= 2.0) {
    p.tempered = true;
    p.theta = std::acos(std::clamp(lambda / 2.0, -1.0, 1.0));
  } else {
    p.tempered = false;
    p.sign = lambda > 0 ? 1 : -1;
    p.r = std::acosh(std::abs(lambda) / 2.0);
  }
  return p;
}

double chebyshev_first(int n, double x) {
  if (n < 0) throw std::invalid_argument("chebyshev_first: negative degree");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_second(int n, double x) {
  if (n == -1) return 0.0;
  if (n == -2) return -1.0;
  if (n < -2) throw std::invalid_argument("chebyshev_second: degree below -2");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double tree_kernel_value(int q, int n, int dist) {
  if (n < 0 || n % 2 != 0)
    throw std::invalid_argument("tree_kernel_value: n must be a nonnegative even integer");
  if (q < 1) throw std::invalid_argument("tree_kernel_value: q must be >= 1");
  if (dist < 0) throw std::invalid_argument("tree_kernel_value: negative distance");
  if (n == 0) return dist == 0 ? 1.0 : 0.0;
  if (dist % 2 != 0 || dist > n) return 0.0;
  const double scale = 1.0 / (2.0 * std::pow(static_cast<double>(q), n / 2));
  return dist == n ? scale : (1.0 - q) * scale;
}

double plancherel_density(int q, double x) {
  if (q < 2) throw std::invalid_argument("plancherel_density: q must be >= 2");
  if (std::abs(x) >= 2.0) return 0.0;
  const double qd = q;
  return (qd + 1.0) * std::sqrt(4.0 - x * x) /
         (2.0 * std::numbers::pi * ((qd + 1.0 / qd + 2.0) - x * x));
}

double plancherel_mass(int q, double lo, double hi) {
  if (q < 2) throw std::invalid_argument("plancherel_mass: q must be >= 2");
  if (lo > hi) throw std::invalid_argument("plancherel_mass: lo > hi");
  lo = std::clamp(lo, -2.0, 2.0);
  hi = std::clamp(hi, -2.0, 2.0);
  if (lo == hi) return 0.0;
  // x = 2cos(t); (q + 1/q + 2) - 4cos^2 t = (q-1)^2/q + 4 sin^2 t.
  const double qd = q;
  const double offset = (qd - 1.0) * (qd - 1.0) / qd;
  auto integrand = [&](double t) {
    const double s = std::sin(t);
    return (qd + 1.0) * 4.0 * s * s /
           (2.0 * std::numbers::pi * (offset + 4.0 * s * s));
  };
  const double t_hi = std::acos(lo / 2.0);
  const double t_lo = std::acos(hi / 2.0);
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, t_lo, t_hi, 20, 1e-14);
}

double plancherel_cdf(int q, double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return plancherel_mass(q, -2.0, x);
}

double avg_cos_square(double theta, int T) {
  if (T <= 0) throw std::invalid_argument("avg_cos_square: T must be positive");
  const double s = std::sin(theta);
  if (std::abs(s) < 1e-8) {
    double sum = 0.0;
    for (int n = 1; n <= T; ++n) {
      const double c = std::cos(n * theta);
      sum += c * c;
    }
    return sum / T;
  }
  return (2.0 * T - 1.0) / (4.0 * T) + std::sin((2.0 * T + 1.0) * theta) / (4.0 * T * s);
}

std::uint64_t tree_closed_walks(int q, int n) {
  if (q < 1) throw std::invalid_argument("tree_closed_walks: q must be >= 1");
  if (n < 0) throw std::invalid_argument("tree_closed_walks: negative length");
  if (n % 2 != 0) return 0;
  // counts[d] = number of walks currently at distance d from the root
  std::vector<std::uint64_t> counts(n / 2 + 2, 0), next(n / 2 + 2, 0);
  counts[0] = 1;
  const auto add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("tree_closed_walks: overflow");
    return r;
  };
  const auto mul = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("tree_closed_walks: overflow");
    return r;
  };
  for (int step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0);
    // only distances that can still return to 0 in the remaining steps matter
    const int remaining = n - step - 1;
    for (std::size_t d = 0; d < counts.size(); ++d) {
      if (counts[d] == 0) continue;
      const std::uint64_t up = d == 0 ? q + 1 : q;
      if (static_cast<int>(d) + 1 <= remaining && d + 1 < next.size())
        next[d + 1] = add(next[d + 1], mul(counts[d], up));
      if (d > 0) next[d - 1] = add(next[d - 1], counts[d]);
    }
    counts.swap(next);
  }
  return counts[0];
}

Mat2 nb_block(double lambda, int q) {
  return {{{0.0, -1.0 / q}, {1.0, lambda / std::sqrt(static_cast<double>(q))}}};
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Mat2 transfer_matrix_power(double lambda, int n) {
  if (n < 0) throw std::invalid_argument("transfer_matrix_power: negative power");
  const Mat2 step{{{0.0, -1.0}, {1.0, lambda}}};
  Mat2 acc{{{1.0, 0.0}, {0.0, 1.0}}};
  for (int k = 0; k < n; ++k) acc = mat2_mul(acc, step);
  return acc;
}

Mat2 transfer_matrix_chebyshev(double lambda, int n) {
  if (n < 0) throw std::invalid_argument("transfer_matrix_chebyshev: negative power");
  const double x = lambda / 2.0;
  return {{{-chebyshev_second(n - 2, x), -chebyshev_second(n - 1, x)},
           {chebyshev_second(n - 1, x), chebyshev_second(n, x)}}};
}

double mat2_norm(const Mat2& a) {
  // sigma_max^2 is the larger eigenvalue of a^T a
  const double p = a[0][0] * a[0][0] + a[1][0] * a[1][0];
  const double r = a[0][1] * a[0][1] + a[1][1] * a[1][1];
  const double c = a[0][0] * a[0][1] + a[1][0] * a[1][1];
  const double mean = 0.5 * (p + r);
  const double diff = 0.5 * (p - r);
  return std::sqrt(mean + std::sqrt(diff * diff + c * c));
}

double gap_from_lambda_star(double lambda_star, int q) {
  const double half_log_q = 0.5 * std::log(static_cast<double>(q));
  const double r = std::acosh(std::max(std::abs(lambda_star), 2.0) / 2.0);
  return std::clamp(half_log_q - r, 0.0, half_log_q);
}

}  // namespace ergolab::spectral
