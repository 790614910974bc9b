#ifndef ERGOLAB_SPHERE_SPECTRUM_HPP
#define ERGOLAB_SPHERE_SPECTRUM_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ergolab/harmonics.hpp"
#include "ergolab/rotations.hpp"

namespace ergolab::sphere {

/// Matrix of T_q = q^{-1/2} sum_j (f o g_j + f o g_j^{-1}) on H_s in the
/// `ylm` basis: q^{-1/2} sum_j (D(g_j) + D(g_j)^dagger).
Eigen::MatrixXcd tq_on_hs(int s, const RotationSet& rots);

/// Joint eigenbasis of the Laplacian and T_q on H_s.
struct JointBasis {
  int s = 0;
  int q = 0;
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // column j: coefficients of psi_j in the ylm basis

  int dim() const { return static_cast<int>(values.size()); }
};

JointBasis joint_basis(int s, const RotationSet& rots);
/// Eigensolve of an already assembled T_q matrix (Hermitian part is used).
JointBasis joint_basis_from_matrix(int s, int q, const Eigen::MatrixXcd& tq);

/// <psi_j, a psi_j> = (V^dagger M V)_jj for every j.
Eigen::VectorXcd sphere_diagonal_elements(const JointBasis& jb, const Eigen::MatrixXcd& m);

/// (1/(2s+1)) sum_j |<psi_j, a psi_j>|^2 for a mean-zero test function with
/// matrix M on H_s.
double quantum_variance_sphere(const JointBasis& jb, const Eigen::MatrixXcd& m);
/// Assembles the basis and M itself. Rejects test functions that are not mean-zero.
double quantum_variance_sphere(int s, const RotationSet& rots, const SphereFunction& a);

struct WindowVariance {
  int count = 0;
  std::optional<double> variance;  // absent for an empty window
};

/// N(I, s) = #{j : lambda(s, j) in [lo, hi]} and the average of
/// |<psi_j, a psi_j>|^2 over those j.
WindowVariance variance_in_window(const JointBasis& jb, const Eigen::MatrixXcd& m, double lo, double hi);

struct KestenMcKayRow {
  int s = 0;
  int count = 0;
  int dim = 0;
  double ratio = 0.0;   // count / dim
  double target = 0.0;  // Plancherel mass of the interval
};

/// Empirical N(I, s) / (2s+1) next to the Plancherel mass of I for each s.
std::vector<KestenMcKayRow> kesten_mckay_empirical(const std::vector<int>& s_list, const RotationSet& rots,
                                                   double lo, double hi);

/// Tr(T_q^n) on H_s by repeated matrix products.
double moment_trace(const Eigen::MatrixXcd& tq, int n);
double moment_trace(int s, const RotationSet& rots, int n);

/// beta_s = log(q)/2 - arccosh(max(lambda*, 2)/2) with lambda* the largest
/// |lambda(s, j)|. H_s carries no trivial eigenvalue for s >= 1; throws for s = 0.
double sphere_gap(const JointBasis& jb);
/// Gap of T_q on the direct sum of H_s over `degrees` (all >= 1): the minimum
/// of the per-degree gaps.
double band_gap(const RotationSet& rots, const std::vector<int>& degrees);

/// (1/T) sum_{n=1..T} P_{2n}(T/2) M P_{2n}(T/2) on H_s, with the Chebyshev
/// matrices built by the three-term recurrence.
Eigen::MatrixXcd time_averaged_matrix(const Eigen::MatrixXcd& tq, const Eigen::MatrixXcd& m, int T);

/// Hilbert-Schmidt norm of the same operator from the joint basis:
/// ||(V^dagger M V) o C||_F with C_ij = (1/T) sum_n P_{2n}(lambda_i/2) P_{2n}(lambda_j/2).
double time_averaged_hs_norm(const JointBasis& jb, const Eigen::MatrixXcd& m, int T);

/// Matrix on H_{s_target} of f -> <Z^{(s_kernel)}_z, f> (convolution with the
/// zonal harmonic), computed by quadrature and projected back onto
/// H_{s_target}. The identity for s_target = s_kernel and zero otherwise.
Eigen::MatrixXcd zonal_convolution_matrix(int s_kernel, int s_target);

}  // namespace ergolab::sphere

#endif  // ERGOLAB_SPHERE_SPECTRUM_HPP
