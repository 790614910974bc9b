#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>

#include "ergolab/harmonics.hpp"
#include "ergolab/rotations.hpp"
#include "ergolab/spectral_core.hpp"
#include "ergolab/sphere_spectrum.hpp"
#include "ergolab/words.hpp"

using namespace ergolab::sphere;
namespace sc = ergolab::spectral;

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
  return q.normalized().toRotationMatrix();
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  return Vec3(n01(rng), n01(rng), n01(rng)).normalized();
}

// Closed-form Wigner small-d (sum over k), usable for small j.
double wigner_d_explicit(int j, int mp, int m, double beta) {
  using boost::math::factorial;
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  double acc = 0.0;
  for (int k = std::max(0, m - mp); k <= std::min(j + m, j - mp); ++k) {
    const double num = std::sqrt(factorial<double>(j + mp) * factorial<double>(j - mp) * factorial<double>(j + m) *
                                 factorial<double>(j - m));
    const double den = factorial<double>(j + m - k) * factorial<double>(k) * factorial<double>(j - k - mp) *
                       factorial<double>(k - m + mp);
    const double sign = ((k - m + mp) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * num / den * std::pow(c, 2 * j - 2 * k + m - mp) * std::pow(s, 2 * k - m + mp);
  }
  return acc;
}

// Character of the degree-s representation at rotation angle theta.
double character(int s, double theta) {
  if (std::abs(std::sin(theta / 2)) < 1e-12) return 2 * s + 1;
  return std::sin((2 * s + 1) * theta / 2) / std::sin(theta / 2);
}

Eigen::VectorXcd random_coeffs(int s, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::VectorXcd c(2 * s + 1);
  for (int i = 0; i < c.size(); ++i) c[i] = cplx(n01(rng), n01(rng));
  return c;
}

}  // namespace

TEST_CASE("legendre values and decay bound") {
  CHECK(legendre(0, 0.3) == 1.0);
  CHECK(legendre(1, 0.3) == 0.3);
  for (int s = 0; s <= 200; ++s) CHECK(legendre(s, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (int s : {10, 50, 100})
    for (int i = 1; i <= 200; ++i) {
      const double theta = 0.5 * kPi * i / 200;
      CHECK(std::abs(legendre(s, std::cos(theta))) < 1.0 / std::sqrt(s * std::sin(theta)));
    }
  for (int s = 0; s <= 30; ++s) CHECK(legendre(s, 0.37) == doctest::Approx(boost::math::legendre_p(s, 0.37)).scale(1.0));
  CHECK_THROWS_AS(legendre(2, 1.5), std::domain_error);
}

TEST_CASE("assoc_legendre conventions") {
  for (int s = 0; s <= 10; ++s) CHECK(assoc_legendre(s, 0, 0.2) == doctest::Approx(legendre(s, 0.2)));
  CHECK(assoc_legendre(1, 1, std::cos(0.4)) == doctest::Approx(-std::sin(0.4)));
  CHECK(assoc_legendre(2, 2, 0.0) == doctest::Approx(3.0));
  // boost includes the same Condon-Shortley phase
  for (int s = 0; s <= 12; ++s)
    for (int m = 0; m <= s; ++m)
      CHECK(assoc_legendre(s, m, -0.61) == doctest::Approx(boost::math::legendre_p(s, m, -0.61)).scale(1.0));
  for (int s = 0; s <= 20; ++s)
    for (int m = 0; m <= s; ++m) {
      const double norm = std::sqrt((2.0 * s + 1) / (4 * kPi) * boost::math::factorial<double>(s - m) /
                                    boost::math::factorial<double>(s + m));
      CHECK(normalized_assoc_legendre(s, m, 0.3) == doctest::Approx(norm * assoc_legendre(s, m, 0.3)).scale(1e-3));
    }
  CHECK_THROWS_AS(assoc_legendre(2, 3, 0.1), std::domain_error);
  CHECK(std::isfinite(normalized_assoc_legendre(200, 200, 0.1)));
}

TEST_CASE("ylm values and symmetry") {
  CHECK(std::abs(ylm(0, 0, 0.3, 1.1) - 1.0 / std::sqrt(4 * kPi)) < 1e-15);
  for (int s : {0, 1, 5, 40}) CHECK(ylm(s, 0, 0.0, 0.7).real() == doctest::Approx(std::sqrt((2 * s + 1) / (4 * kPi))));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ut(0.0, kPi), up(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const double t = ut(rng), p = up(rng);
    for (int s = 0; s <= 8; ++s)
      for (int m = 0; m <= s; ++m) {
        // the basis carries an extra (-1)^m relative to the usual convention
        const cplx ref = ((m % 2) ? -1.0 : 1.0) * boost::math::spherical_harmonic(s, m, t, p);
        CHECK(std::abs(ylm(s, m, t, p) - ref) < 1e-12);
        CHECK(std::abs(ylm(s, -m, t, p) - ((m % 2) ? -1.0 : 1.0) * std::conj(ylm(s, m, t, p))) < 1e-14);
      }
  }
  CHECK_THROWS(ylm(2, 3, 0.1, 0.1));
}

TEST_CASE("harmonic space gram matrix is the identity") {
  for (int s : {0, 1, 7, 30, 60}) {
    const HarmonicSpace space(s);
    CHECK(space.dim() == 2 * s + 1);
    CHECK((space.gram() - Eigen::MatrixXcd::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("quadrature weights integrate constants") {
  const QuadratureGrid g = make_grid(17, 33);
  double total = 0.0;
  for (int i = 0; i < g.n_theta(); ++i) total += g.weights[i] * g.phi_weight * g.n_phi();
  CHECK(total == doctest::Approx(4 * kPi));
  const auto [x, w] = gauss_legendre(9);
  double moment = 0.0;
  for (int i = 0; i < 9; ++i) moment += w[i] * std::pow(x[i], 16);
  CHECK(moment == doctest::Approx(2.0 / 17));
}

TEST_CASE("zonal harmonic normalization and reproducing property") {
  std::mt19937_64 rng(4);
  const Vec3 z = random_unit(rng);
  CHECK(zonal(6, z, z) == doctest::Approx(13 / (4 * kPi)));
  for (int s : {3, 12}) {
    const HarmonicSpace space(s);
    const Vec3 zz = random_unit(rng);
    const auto [tz, pz] = cartesian_to_spherical(zz);
    const Eigen::VectorXcd c = space.project([&](double t, double p) { return cplx(zonal(s, zz, spherical_to_cartesian(t, p)), 0.0); });
    // <Y^m, Z_z> = conj(Y^m(z))
    for (int m = -s; m <= s; ++m) CHECK(std::abs(c[m + s] - std::conj(ylm(s, m, tz, pz))) < 1e-8);
  }
}

TEST_CASE("zonal inner products against the two-hemisphere bound (logged)") {
  // |<Z_z, Z_z'>| = Z_z(z') by reproduction; the stated bound uses the
  // distance to z' or -z', whichever is closer.
  std::mt19937_64 rng(8);
  int violations = 0, trials = 0;
  for (int s : {10, 40, 100})
    for (int i = 0; i < 100; ++i) {
      const Vec3 a = random_unit(rng), b = random_unit(rng);
      const double d = std::min(std::acos(std::clamp(a.dot(b), -1.0, 1.0)), std::acos(std::clamp(-a.dot(b), -1.0, 1.0)));
      ++trials;
      if (std::abs(zonal(s, a, b)) > 2.0 * std::sqrt(s / d)) ++violations;
    }
  MESSAGE("zonal bound violations: " << violations << " of " << trials);
  CHECK(trials == 300);
}

TEST_CASE("rotation sets and files") {
  const RotationSet def = RotationSet::default_set();
  CHECK(def.count() == 2);
  CHECK(def.q() == 3);
  CHECK(std::cos(rotation_angle(def.generator(0))) == doctest::Approx(0.6));
  std::istringstream in("# two rotations\n3/5 -4/5 0  4/5 3/5 0  0 0 1\n1 0 0 0 0.6 -0.8 0 0.8 0.6\n");
  const RotationSet parsed = parse_rotation_set(in);
  CHECK((parsed.generator(0) - def.generator(0)).norm() < 1e-15);
  CHECK((parsed.generator(1) - def.generator(1)).norm() < 1e-15);
  std::istringstream bad("1 0 0 0 1 0 0 0 1\n1 0 0 0 1 0 0 0 1.001\n");
  CHECK_THROWS_AS(parse_rotation_set(bad), std::invalid_argument);
  std::istringstream odd("1 0 0 0 1 0 0 0\n");
  CHECK_THROWS_AS(parse_rotation_set(odd), std::invalid_argument);
  std::istringstream word("1 0 0 0 1 0 0 0 x\n");
  CHECK_THROWS_AS(parse_rotation_set(word), std::invalid_argument);
  CHECK_THROWS_AS(RotationSet({Mat3::Identity()}), std::invalid_argument);
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1;
  CHECK_THROWS_AS(RotationSet({Mat3::Identity(), reflection}), std::invalid_argument);
}

TEST_CASE("rotation angle and axis") {
  std::mt19937_64 rng(2);
  for (double angle : {1e-9, 1e-4, 0.3, 1.5, 3.0, kPi - 1e-7, kPi}) {
    const Vec3 axis = random_unit(rng);
    const Mat3 r = rotation_about(axis, angle);
    CHECK(rotation_angle(r) == doctest::Approx(angle).epsilon(1e-7));
    const Vec3 got = rotation_axis(r);
    CHECK(std::abs(std::abs(got.dot(axis)) - 1.0) < 1e-6);
  }
}

TEST_CASE("euler angles reconstruct the rotation") {
  const EulerZYZ id = euler_zyz(Mat3::Identity());
  CHECK(id.alpha == 0.0);
  CHECK(id.beta == 0.0);
  CHECK(id.gamma == 0.0);
  const EulerZYZ z = euler_zyz(rot_z(0.5));
  CHECK(z.alpha + z.gamma == doctest::Approx(0.5));
  CHECK(z.beta == 0.0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Mat3 r = random_rotation(rng);
    const EulerZYZ e = euler_zyz(r);
    CHECK(e.beta >= 0.0);
    CHECK(e.beta <= kPi);
    CHECK((from_euler(e) - r).norm() < 1e-10);
  }
  for (double beta : {1e-13, 1e-9, kPi - 1e-9, kPi - 1e-13, kPi}) {
    const Mat3 r = rot_z(0.7) * rot_y(beta) * rot_z(-1.9);
    CHECK((from_euler(euler_zyz(r)) - r).norm() < 1e-10);
  }
}

TEST_CASE("wigner small d matches the closed form") {
  for (int j = 0; j <= 10; ++j)
    for (double beta : {0.0, 0.3, 1.7, kPi}) {
      const Eigen::MatrixXd d = wigner_small_d(j, beta);
      for (int mp = -j; mp <= j; ++mp)
        for (int m = -j; m <= j; ++m) CHECK(std::abs(d(mp + j, m + j) - wigner_d_explicit(j, mp, m, beta)) < 1e-11);
    }
}

TEST_CASE("wigner D: identity, unitarity, homomorphism") {
  for (int s : {0, 3, 17}) {
    const Eigen::MatrixXcd d = wigner_D(s, Mat3::Identity());
    CHECK((d - Eigen::MatrixXcd::Identity(2 * s + 1, 2 * s + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
  std::mt19937_64 rng(12);
  for (int s : {1, 5, 20, 40, 200})
    for (int i = 0; i < 5; ++i) {
      const Mat3 a = random_rotation(rng), b = random_rotation(rng);
      const Eigen::MatrixXcd da = wigner_D(s, a), db = wigner_D(s, b);
      const int d = 2 * s + 1;
      CHECK((da.adjoint() * da - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((wigner_D(s, a * b) - da * db).cwiseAbs().maxCoeff() < 1e-8);
      CHECK(da.trace().real() == doctest::Approx(character(s, rotation_angle(a))).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("wigner D acts as composition with the inverse rotation") {
  std::mt19937_64 rng(21);
  for (int s : {1, 4, 20}) {
    const HarmonicSpace space(s);
    const Eigen::VectorXcd c = random_coeffs(s, rng);
    const Mat3 r = random_rotation(rng);
    const Eigen::VectorXcd rotated = wigner_D(s, r) * c;
    double err = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 x = random_unit(rng);
      const auto [t, p] = cartesian_to_spherical(x);
      const auto [tr, pr] = cartesian_to_spherical(r.transpose() * x);
      err = std::max(err, std::abs(space.evaluate(rotated, t, p) - space.evaluate(c, tr, pr)));
    }
    CHECK(err < 1e-7);
  }
}

TEST_CASE("T_q on H_s") {
  const RotationSet rots = RotationSet::default_set();
  const Eigen::MatrixXcd t0 = tq_on_hs(0, rots);
  CHECK(t0.rows() == 1);
  CHECK(t0(0, 0).real() == doctest::Approx(4 / std::sqrt(3.0)));
  CHECK(t0(0, 0).real() == doctest::Approx(sc::trivial_eigenvalue(3)));

  for (int s : {1, 6, 25}) {
    const Eigen::MatrixXcd t = tq_on_hs(s, rots);
    CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    const JointBasis jb = joint_basis(s, rots);
    CHECK(jb.values.maxCoeff() < sc::trivial_eigenvalue(3) - 1e-8);
    CHECK(jb.values.minCoeff() > -sc::trivial_eigenvalue(3) - 1e-8);
    for (int j = 1; j < jb.dim(); ++j) CHECK(jb.values[j] >= jb.values[j - 1]);
    CHECK((t * jb.vectors - jb.vectors * jb.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-8);
    const int d = jb.dim();
    CHECK((jb.vectors.adjoint() * jb.vectors - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK(joint_basis(0, rots).values[0] == doctest::Approx(sc::trivial_eigenvalue(3)));

  // pointwise oracle: q^{-1/2} sum_j f(g_j x) + f(g_j^{-1} x), projected by quadrature
  std::mt19937_64 rng(30);
  const int s = 7;
  const HarmonicSpace space(s);
  const Eigen::VectorXcd c = random_coeffs(s, rng);
  const auto averaged = [&](double theta, double phi) {
    const Vec3 x = spherical_to_cartesian(theta, phi);
    cplx acc{0.0, 0.0};
    for (const Mat3& g : rots.generators())
      for (const Vec3& y : {Vec3(g * x), Vec3(g.transpose() * x)}) {
        const auto [ty, py] = cartesian_to_spherical(y);
        acc += space.evaluate(c, ty, py);
      }
    return acc / std::sqrt(3.0);
  };
  CHECK((space.project(averaged) - tq_on_hs(s, rots) * c).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("matrix elements of multiplication operators") {
  const HarmonicSpace space(9, 2);
  const Eigen::MatrixXcd c = matrix_element_operator(space, SphereFunction::pointwise([](double, double) { return cplx(2.5, 0.0); }, 2.5));
  CHECK((c - 2.5 * Eigen::MatrixXcd::Identity(19, 19)).cwiseAbs().maxCoeff() < 1e-10);

  const SphereFunction y10 = SphereFunction::expansion({{1, 0, cplx(1.0, 0.0)}});
  const Eigen::MatrixXcd m10 = matrix_element_operator(space, y10);
  for (int r = 0; r < 19; ++r)
    for (int k = 0; k < 19; ++k)
      if (r != k) CHECK(std::abs(m10(r, k)) < 1e-12);

  const SphereFunction real_band = SphereFunction::expansion([] {
    auto t = real_harmonic(2, 1, 0.7);
    auto u = real_harmonic(1, -1, -0.4);
    t.insert(t.end(), u.begin(), u.end());
    return t;
  }());
  const Eigen::MatrixXcd m = matrix_element_operator(space, real_band);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10);

  // brute-force oracle: direct double sum with pointwise ylm on a finer grid
  const QuadratureGrid fine = make_grid(30, 61);
  for (auto [r, k] : {std::pair{0, 0}, std::pair{3, 5}, std::pair{10, 8}, std::pair{18, 17}}) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < fine.n_theta(); ++i)
      for (int j = 0; j < fine.n_phi(); ++j) {
        const double t = fine.theta[i], p = fine.phi[j];
        acc += fine.weights[i] * fine.phi_weight * std::conj(ylm(9, r - 9, t, p)) * real_band(t, p) * ylm(9, k - 9, t, p);
      }
    CHECK(std::abs(acc - m(r, k)) < 1e-10);
  }

  const SphereFunction too_high = SphereFunction::expansion({{5, 0, cplx(1.0, 0.0)}});
  CHECK_THROWS_AS(matrix_element_operator(space, too_high), std::invalid_argument);
}

TEST_CASE("sphere functions") {
  const auto terms = real_harmonic(3, 2);
  const SphereFunction f = SphereFunction::expansion(terms);
  CHECK(f.band() == 3);
  CHECK(f.is_mean_zero());
  CHECK(f.l2_norm_squared() == doctest::Approx(1.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = random_unit(rng);
    const auto [t, p] = cartesian_to_spherical(x);
    CHECK(std::abs(f(t, p).imag()) < 1e-14);
    CHECK(std::abs(f(t, p)) <= f.sup_bound() + 1e-14);
  }
  const SphereFunction g = SphereFunction::pointwise([](double t, double) { return cplx(std::cos(t), 0.0); }, 1.0);
  CHECK_FALSE(g.band().has_value());
  CHECK(g.is_mean_zero());
  CHECK(g.l2_norm_squared() == doctest::Approx(4 * kPi / 3));
  CHECK_FALSE(SphereFunction::expansion({{0, 0, cplx(1.0, 0.0)}}).is_mean_zero());
}

TEST_CASE("quantum variance on the sphere") {
  const RotationSet rots = RotationSet::default_set();
  CHECK(quantum_variance_sphere(10, rots, SphereFunction::zero()) == 0.0);
  const SphereFunction a = SphereFunction::expansion(real_harmonic(2, 0));
  const double v = quantum_variance_sphere(12, rots, a);
  CHECK(v >= 0.0);
  CHECK(v <= a.sup_bound() * a.sup_bound());
  CHECK_THROWS_AS(quantum_variance_sphere(5, rots, SphereFunction::expansion({{0, 0, cplx(1.0, 0.0)}})),
                  std::invalid_argument);
}

TEST_CASE("spectral windows and the Kesten-McKay table") {
  const RotationSet rots = RotationSet::default_set();
  const int s = 60;
  const JointBasis jb = joint_basis(s, rots);
  const HarmonicSpace space(s, 2);
  const Eigen::MatrixXcd m = matrix_element_operator(space, SphereFunction::expansion(real_harmonic(2, 0)));
  const WindowVariance full = variance_in_window(jb, m, -2.0, 2.0);
  CHECK(full.count >= 0.9 * (2 * s + 1));
  CHECK(full.variance.has_value());
  const WindowVariance left = variance_in_window(jb, m, -2.0, 0.0);
  const WindowVariance right = variance_in_window(jb, m, std::nextafter(0.0, 1.0), 2.0);
  CHECK(left.count + right.count <= 2 * s + 1);
  const WindowVariance empty = variance_in_window(jb, m, 2.1, 2.2);
  CHECK(empty.count == 0);
  CHECK_FALSE(empty.variance.has_value());

  const auto rows = kesten_mckay_empirical({40, 60}, rots, -2.0, 2.0);
  for (const auto& row : rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.05));
  const auto half = kesten_mckay_empirical({60}, rots, -2.0, 0.0);
  CHECK(half[0].ratio == doctest::Approx(0.5).epsilon(0.1));
  CHECK(half[0].target == doctest::Approx(0.5));
}

TEST_CASE("moment traces agree with a character sum over all words") {
  const RotationSet rots = RotationSet::default_set();
  for (int s : {3, 20, 50}) {
    CHECK(moment_trace(s, rots, 0) == 2 * s + 1);
    for (int n = 1; n <= 4; ++n) {
      // sum over all (not necessarily reduced) words of length n
      double acc = 0.0;
      const int letters = 2 * rots.count();
      int total = 1;
      for (int i = 0; i < n; ++i) total *= letters;
      for (int code = 0; code < total; ++code) {
        Mat3 w = Mat3::Identity();
        for (int i = 0, c = code; i < n; ++i, c /= letters) w = w * rots.letter(c % letters);
        acc += character(s, rotation_angle(w));
      }
      acc /= std::pow(3.0, n / 2.0);
      CHECK(moment_trace(s, rots, n) == doctest::Approx(acc).scale(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("word tables") {
  const RotationSet rots = RotationSet::default_set();
  const WordTable one = word_table(rots, 1);
  CHECK(one.words.size() == 4);
  for (int c = 0; c < 4; ++c) CHECK(one.words[c].angle == doctest::Approx(std::acos(0.6)));
  const WordTable t = word_table(rots, 6);
  for (int l = 1; l <= 6; ++l) CHECK(t.offsets[l] - t.offsets[l - 1] == reduced_word_count(2, l));
  CHECK(reduced_word_count(2, 3) == 36);
  for (const Word& w : t.words)
    for (std::size_t i = 1; i < w.letters.size(); ++i) CHECK(w.letters[i] != (w.letters[i - 1] ^ 1));
  CHECK(t.collisions.empty());
  for (double a : t.min_angle) CHECK(a > 1e-6);
  // matrices are products of letters
  const Word& w = t.words.back();
  Mat3 prod = Mat3::Identity();
  for (auto c : w.letters) prod = prod * rots.letter(c);
  CHECK((prod - w.matrix).norm() < 1e-12);
  CHECK_THROWS_AS(word_table(rots, 12, 1000), std::length_error);
  CHECK(word_to_string({0, 1, 2, 3}) == "aAbB");
}

TEST_CASE("orbit separation") {
  const RotationSet rots = RotationSet::default_set();
  const Vec3 x = Vec3(0.3, -0.5, 0.81).normalized();
  CHECK(std::isinf(min_orbit_separation(rots, x, 0).distance));
  const OrbitSeparation sep = min_orbit_separation(rots, x, 3);
  CHECK(sep.distance > 0.0);

  // exhaustive pairwise oracle over the orbit ball and its antipodes
  const WordTable t = word_table(rots, 3);
  std::vector<Vec3> pts{x};
  for (const Word& w : t.words) pts.push_back(w.matrix * x);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double c = std::clamp(pts[i].dot(pts[j]), -1.0, 1.0);
      best = std::min({best, std::acos(c), kPi - std::acos(c)});
    }
  CHECK(sep.distance == doctest::Approx(best).epsilon(1e-9));
  CHECK(separation_exceeds(sep, static_cast<int>(std::ceil(4.0 / (sep.distance * sep.distance)))));

  const RotationSet same({rot_z(0.4), rot_z(0.4)});
  CHECK_THROWS_AS(min_orbit_separation(same, x, 1), std::runtime_error);
  try {
    min_orbit_separation(same, x, 1);
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("words") != std::string::npos);
  }
}

TEST_CASE("fixed points and the bad set") {
  const RotationSet about_z({rot_z(0.4), rot_z(1.3)});
  const auto pts = fixed_point_set(about_z, 2);
  CHECK_FALSE(pts.empty());
  for (const Vec3& p : pts) CHECK(std::abs(std::abs(p.z()) - 1.0) < 1e-12);

  const RotationSet rots = RotationSet::default_set();
  const auto fp = fixed_point_set(rots, 3);
  CHECK(fp.size() <= 2 * word_table(rots, 3).words.size());
  for (const Vec3& p : fp) CHECK(p.norm() == doctest::Approx(1.0));
  const double bound = bad_set_fraction_bound(fp.size(), 10000);
  const double estimate = bad_set_fraction_estimate(fp, 10000, 20000, 5);
  CHECK(estimate <= bound + 0.01);
  CHECK(bad_set_fraction_bound(1000000, 4) == 1.0);
}

TEST_CASE("zonal convolution projects onto H_s") {
  for (int s : {2, 4}) {
    const Eigen::MatrixXcd same = zonal_convolution_matrix(s, s);
    CHECK((same - Eigen::MatrixXcd::Identity(2 * s + 1, 2 * s + 1)).cwiseAbs().maxCoeff() < 1e-9);
    for (int sp = 0; sp <= 2 * s; ++sp)
      if (sp != s) CHECK(zonal_convolution_matrix(s, sp).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("time-averaged operator on H_s") {
  const RotationSet rots = RotationSet::default_set();
  const int s = 20;
  const JointBasis jb = joint_basis(s, rots);
  const HarmonicSpace space(s, 3);
  for (const auto& terms : {real_harmonic(2, 0), real_harmonic(3, -2), real_harmonic(1, 1)}) {
    const Eigen::MatrixXcd m = matrix_element_operator(space, SphereFunction::expansion(terms));
    const Eigen::MatrixXcd at = time_averaged_matrix(tq_on_hs(s, rots), m, 10);
    const double hs = time_averaged_hs_norm(jb, m, 10);
    CHECK(at.norm() == doctest::Approx(hs).epsilon(1e-8));
    const double lhs = sphere_diagonal_elements(jb, m).cwiseAbs2().sum();
    CHECK(lhs <= hs * hs / 0.09);
  }
}

TEST_CASE("time-averaged HS norm does not grow with T at fixed s") {
  const RotationSet rots = RotationSet::default_set();
  const int s = 80;
  const JointBasis jb = joint_basis(s, rots);
  const HarmonicSpace space(s, 2);
  const Eigen::MatrixXcd m = matrix_element_operator(space, SphereFunction::expansion(real_harmonic(2, 0)));
  double prev = std::numeric_limits<double>::infinity();
  std::ostringstream log;
  for (int T = 10; T <= 40; T += 5) {
    const double v = std::pow(time_averaged_hs_norm(jb, m, T), 2) / (2 * s + 1);
    log << " T=" << T << ":" << v;
    CHECK(v <= prev * (1.0 + 1e-12));
    prev = v;
  }
  MESSAGE("HS^2/(2s+1) by T:" << log.str());
}

TEST_CASE("measured gaps") {
  const RotationSet rots = RotationSet::default_set();
  double running = std::numeric_limits<double>::infinity();
  for (int s = 1; s <= 30; ++s) {
    const double b = sphere_gap(joint_basis(s, rots));
    CHECK(b >= 0.0);
    CHECK(b <= std::log(3.0) / 2 + 1e-12);
    running = std::min(running, b);
  }
  MESSAGE("running minimum gap over s <= 30: " << running);
  CHECK(band_gap(rots, {1, 2, 3}) ==
        doctest::Approx(std::min({sphere_gap(joint_basis(1, rots)), sphere_gap(joint_basis(2, rots)),
                                  sphere_gap(joint_basis(3, rots))})));
  CHECK_THROWS(sphere_gap(joint_basis(0, rots)));
}
