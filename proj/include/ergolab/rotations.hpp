#ifndef ERGOLAB_ROTATIONS_HPP
#define ERGOLAB_ROTATIONS_HPP

#include <filesystem>
#include <istream>
#include <vector>

#include <Eigen/Dense>

namespace ergolab::sphere {

using Mat3 = Eigen::Matrix3d;

/// Generators g_1..g_N of SO(3), with q = 2N - 1.
class RotationSet {
 public:
  /// Throws std::invalid_argument unless every matrix satisfies
  /// ||R^T R - I|| <= tol and det R = 1 within tol, and N >= 2.
  explicit RotationSet(std::vector<Mat3> generators, double tol = 1e-12);

  /// Rotations by arccos(3/5) about the z and x axes (N = 2, q = 3).
  static RotationSet default_set();

  int count() const { return static_cast<int>(gens_.size()); }
  int q() const { return 2 * count() - 1; }
  const Mat3& generator(int i) const { return gens_[i]; }
  const std::vector<Mat3>& generators() const { return gens_; }
  /// Letter 2i is g_i, letter 2i+1 is g_i^{-1}.
  Mat3 letter(int code) const;

 private:
  std::vector<Mat3> gens_;
};

/// Rotation files hold 9 numbers per matrix in row-major order, decimal or
/// exact rationals "p/q", separated by whitespace; '#' starts a comment.
RotationSet parse_rotation_set(std::istream& in);
RotationSet load_rotation_set(const std::filesystem::path& path);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);
/// Rotation by `angle` about unit `axis` (right-hand rule).
Mat3 rotation_about(const Eigen::Vector3d& axis, double angle);

struct EulerZYZ {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// R = Rz(alpha) Ry(beta) Rz(gamma), beta in [0, pi]. Near the gimbal
/// positions beta in {0, pi} gamma is set to 0.
EulerZYZ euler_zyz(const Mat3& r);
Mat3 from_euler(const EulerZYZ& e);

/// Rotation angle in [0, pi], stable near 0 and pi.
double rotation_angle(const Mat3& r);
/// Unit rotation axis; arbitrary unit vector for the identity.
Eigen::Vector3d rotation_axis(const Mat3& r);

/// Wigner small-d matrix d^s_{m' m}(beta), rows m' and columns m from -s to s.
Eigen::MatrixXd wigner_small_d(int s, double beta);

/// Matrix of f -> f o R^{-1} on degree-s harmonics in the `ylm` basis:
/// column m holds the coefficients of Y_s^m o R^{-1}. Unitary, and
/// D(R1 R2) = D(R1) D(R2).
Eigen::MatrixXcd wigner_D(int s, const Mat3& r);

}  // namespace ergolab::sphere

#endif  // ERGOLAB_ROTATIONS_HPP
