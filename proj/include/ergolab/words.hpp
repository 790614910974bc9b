#ifndef ERGOLAB_WORDS_HPP
#define ERGOLAB_WORDS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergolab/rotations.hpp"

namespace ergolab::sphere {

/// Default cap on the number of words enumerated by the functions below.
inline constexpr std::size_t kDefaultWordBudget = 1'000'000;

/// Number of reduced words of length exactly `length` in N generators:
/// 2N (2N-1)^(length-1), and 1 for length 0.
std::uint64_t reduced_word_count(int n_generators, int length);

struct Word {
  std::vector<std::uint8_t> letters;  // letter 2i = g_i, 2i+1 = g_i^{-1}
  Mat3 matrix;                        // product of the letters, left to right
  double angle = 0.0;                 // rotation angle of `matrix`
};

/// Printable form: 'a', 'b', ... for generators and 'A', 'B', ... for inverses.
std::string word_to_string(const std::vector<std::uint8_t>& letters);

/// All reduced words of length 1..max_length, ordered by length.
struct WordTable {
  int n_generators = 0;
  int max_length = 0;
  std::vector<Word> words;
  /// Words of length l occupy [offsets[l-1], offsets[l]).
  std::vector<std::size_t> offsets;
  /// Smallest rotation angle among words of each length 1..max_length.
  std::vector<double> min_angle;
  /// Words whose matrix is the identity within `collision_tol`.
  std::vector<std::size_t> collisions;
};

/// Enumerates reduced words by extending each word of length l-1 with every
/// letter except the inverse of its last one. Throws std::length_error when the
/// table would exceed `budget` words.
WordTable word_table(const RotationSet& rots, int max_length, std::size_t budget = kDefaultWordBudget,
                     double collision_tol = 1e-12);

struct OrbitSeparation {
  double distance = std::numeric_limits<double>::infinity();
  bool antipodal = false;  // closest pair is gamma x and -gamma' x
  std::string word_a;
  std::string word_b;
};

/// Smallest great-circle distance between distinct points of the orbit ball
/// {gamma x : |gamma| <= n}, or between an orbit point and the antipode of
/// another. Throws std::runtime_error when two
/// distinct words send x to the same point within 1e-13; the message names
/// both words. n = 0 gives an infinite separation.
OrbitSeparation min_orbit_separation(const RotationSet& rots, const Eigen::Vector3d& x, int n,
                                     std::size_t budget = kDefaultWordBudget);

/// Orbit-separation condition at degree s: separation larger than s^{-1/2}.
bool separation_exceeds(const OrbitSeparation& sep, int s);

/// Rotation axes (both poles) of the nontrivial words of length <= max_length.
std::vector<Eigen::Vector3d> fixed_point_set(const RotationSet& rots, int max_length,
                                             std::size_t budget = kDefaultWordBudget);

/// Upper bound on the area fraction of the union of s^{-1/4}-caps (geodesic
/// radius) around `points`: |points| times one cap's fraction, capped at 1.
double bad_set_fraction_bound(std::size_t n_points, int s);

/// Monte Carlo estimate of the same area fraction with uniform samples.
double bad_set_fraction_estimate(const std::vector<Eigen::Vector3d>& points, int s, int samples,
                                 std::uint64_t seed);

}  // namespace ergolab::sphere

#endif  // ERGOLAB_WORDS_HPP
