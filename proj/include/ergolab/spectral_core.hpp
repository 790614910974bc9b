#ifndef ERGOLAB_SPECTRAL_CORE_HPP
#define ERGOLAB_SPECTRAL_CORE_HPP

#include <array>
#include <cstdint>

// Degree-agnostic spectral primitives shared by the graph and sphere code:
// Chebyshev polynomials, the propagation kernel of the (q+1)-regular tree,
// the Kesten-McKay (q-adic Plancherel) law and closed-walk counts.
//
// Throughout, T_q denotes the averaging operator normalized by 1/sqrt(q), so
// its spectrum on a (q+1)-regular structure lies in
// [-2cosh(log q / 2), 2cosh(log q / 2)] and the tempered part is [-2, 2].
namespace ergolab::spectral {

using Mat2 = std::array<std::array<double, 2>, 2>;

/// 2cosh(log(q)/2) = (q+1)/sqrt(q), the trivial eigenvalue of T_q.
double trivial_eigenvalue(int q);

/// Eigenvalue of T_q together with its angle parametrization.
///
/// Tempered values (|lambda| <= 2) are written lambda = 2cos(theta) with
/// theta in [0, pi]; untempered ones as lambda = sign * 2cosh(r), r > 0.
struct SpectralParam {
  double lambda = 0.0;
  bool tempered = true;
  double theta = 0.0;  // valid when tempered
  double r = 0.0;      // valid when untempered
  int sign = 1;        // valid when untempered

  static SpectralParam from_lambda(double lambda);
};

/// P_n(x) via P_{n+1} = 2x P_n - P_{n-1}; P_n(cos t) = cos(n t).
double chebyshev_first(int n, double x);

/// U_n(x) via the same recurrence with U_1 = 2x; U_n(cosh t) = sinh((n+1)t)/sinh(t).
/// Negative indices follow the recurrence backwards: U_{-1} = 0, U_{-2} = -1.
double chebyshev_second(int n, double x);

/// Value of P_n(T_q/2) delta_0 at a tree vertex at distance `dist` from 0.
/// Requires even n >= 0 (throws std::invalid_argument otherwise).
double tree_kernel_value(int q, int n, int dist);

/// Kesten-McKay density of the sqrt(q)-normalized tree operator:
///   (q+1) sqrt(4 - x^2) / (2 pi ((q + 1/q + 2) - x^2))   on [-2, 2], else 0.
double plancherel_density(int q, double x);

/// Mass of [lo, hi] under the Plancherel measure (clipped to [-2, 2]).
/// Adaptive Gauss-Kronrod in the angle variable x = 2cos(t), where the
/// integrand is smooth; absolute error well below 1e-10.
double plancherel_mass(int q, double lo, double hi);

/// Distribution function of the Plancherel measure.
double plancherel_cdf(int q, double x);

/// (1/T) sum_{n=1..T} cos^2(n theta). Closed form except near sin(theta) = 0,
/// where the sum is evaluated directly.
double avg_cos_square(double theta, int T);

/// Number of closed walks of length n at a vertex of the (q+1)-regular tree.
/// Odd n gives 0. Throws std::overflow_error if the count exceeds 64 bits.
std::uint64_t tree_closed_walks(int q, int n);

/// Action of the non-backtracking operator on span{Bw, Ew} for a T_q
/// eigenfunction w with eigenvalue lambda: [[0, -1/q], [1, lambda/sqrt(q)]].
Mat2 nb_block(double lambda, int q);

/// n-th power of [[0, -1], [1, lambda]] by repeated multiplication.
Mat2 transfer_matrix_power(double lambda, int n);

/// The same power written with second-kind Chebyshev polynomials at lambda/2:
/// [[-U_{n-2}, -U_{n-1}], [U_{n-1}, U_n]].
Mat2 transfer_matrix_chebyshev(double lambda, int n);

Mat2 mat2_mul(const Mat2& a, const Mat2& b);

/// Largest singular value of a real 2x2 matrix (closed form).
double mat2_norm(const Mat2& a);

/// beta = log(q)/2 - arccosh(max(lambda_star, 2)/2), the expansion gap implied
/// by the largest nontrivial |eigenvalue|. Clamped to [0, log(q)/2].
double gap_from_lambda_star(double lambda_star, int q);

}  // namespace ergolab::spectral

#endif  // ERGOLAB_SPECTRAL_CORE_HPP
