#include "ergolab/words.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ergolab::sphere {

namespace {

void check_budget(std::uint64_t needed, std::size_t budget, const char* who) {
  if (needed > budget)
    throw std::length_error(std::string(who) + ": " + std::to_string(needed) + " words exceed the budget of " +
                            std::to_string(budget));
}

std::uint64_t words_up_to(int n_generators, int length) {
  std::uint64_t total = 0;
  for (int l = 0; l <= length; ++l) {
    const std::uint64_t c = reduced_word_count(n_generators, l);
    if (c == std::numeric_limits<std::uint64_t>::max() || total + c < total)
      return std::numeric_limits<std::uint64_t>::max();
    total += c;
  }
  return total;
}

}  // namespace

std::uint64_t reduced_word_count(int n_generators, int length) {
  if (n_generators < 1 || length < 0) throw std::invalid_argument("reduced_word_count: bad arguments");
  if (length == 0) return 1;
  std::uint64_t c = 2ULL * n_generators;
  const std::uint64_t branch = 2ULL * n_generators - 1;
  for (int l = 1; l < length; ++l) {
    if (branch != 0 && c > std::numeric_limits<std::uint64_t>::max() / branch)
      return std::numeric_limits<std::uint64_t>::max();
    c *= branch;
  }
  return c;
}

std::string word_to_string(const std::vector<std::uint8_t>& letters) {
  if (letters.empty()) return "e";
  std::string out;
  for (std::uint8_t c : letters) out.push_back(static_cast<char>((c % 2 == 0 ? 'a' : 'A') + c / 2));
  return out;
}

WordTable word_table(const RotationSet& rots, int max_length, std::size_t budget, double collision_tol) {
  if (max_length < 0) throw std::invalid_argument("word_table: negative length");
  const int n = rots.count();
  check_budget(words_up_to(n, max_length) - 1, budget, "word_table");
  WordTable t;
  t.n_generators = n;
  t.max_length = max_length;
  t.offsets.push_back(0);
  for (int len = 1; len <= max_length; ++len) {
    const std::size_t begin = (len == 1) ? 0 : t.offsets[len - 2];
    const std::size_t end = t.words.size();
    if (len == 1) {
      for (int c = 0; c < 2 * n; ++c) t.words.push_back({{static_cast<std::uint8_t>(c)}, rots.letter(c), 0.0});
    } else {
      for (std::size_t w = begin; w < end; ++w)
        for (int c = 0; c < 2 * n; ++c) {
          const int last = t.words[w].letters.back();
          if (c == (last ^ 1)) continue;
          Word next;
          next.letters = t.words[w].letters;
          next.letters.push_back(static_cast<std::uint8_t>(c));
          next.matrix = t.words[w].matrix * rots.letter(c);
          t.words.push_back(std::move(next));
        }
    }
    t.offsets.push_back(t.words.size());
    double min_angle = std::numeric_limits<double>::infinity();
    for (std::size_t w = t.offsets[len - 1]; w < t.offsets[len]; ++w) {
      Word& word = t.words[w];
      word.angle = rotation_angle(word.matrix);
      min_angle = std::min(min_angle, word.angle);
      if (word.angle < collision_tol) t.collisions.push_back(w);
    }
    t.min_angle.push_back(min_angle);
  }
  return t;
}

OrbitSeparation min_orbit_separation(const RotationSet& rots, const Eigen::Vector3d& x, int n, std::size_t budget) {
  if (n < 0) throw std::invalid_argument("min_orbit_separation: negative length");
  if (std::abs(x.norm() - 1.0) > 1e-12) throw std::invalid_argument("min_orbit_separation: x must be a unit vector");
  OrbitSeparation result;
  if (n == 0) return result;
  check_budget(words_up_to(rots.count(), n), budget, "min_orbit_separation");

  // Words grow on the left, w' = c w, so w' x = c (w x) reuses the parent point.
  // `letter` is the first letter of the word; the parent holds the rest.
  struct Node {
    Eigen::Vector3d point;
    int parent;
    int letter;
  };
  std::vector<Mat3> letter_mats;
  for (int c = 0; c < 2 * rots.count(); ++c) letter_mats.push_back(rots.letter(c));
  std::vector<Node> nodes{{x, -1, -1}};
  std::size_t begin = 0;
  for (int len = 1; len <= n; ++len) {
    const std::size_t end = nodes.size();
    for (std::size_t i = begin; i < end; ++i)
      for (int c = 0; c < 2 * rots.count(); ++c) {
        if (nodes[i].letter >= 0 && c == (nodes[i].letter ^ 1)) continue;
        nodes.push_back({letter_mats[c] * nodes[i].point, static_cast<int>(i), c});
      }
    begin = end;
  }
  auto letters_of = [&](int i) {
    std::vector<std::uint8_t> ls;
    for (int v = i; nodes[v].parent >= 0; v = nodes[v].parent) ls.push_back(static_cast<std::uint8_t>(nodes[v].letter));
    return ls;
  };

  struct Entry {
    Eigen::Vector3d p;
    int word;
    int sign;
  };
  std::vector<Entry> entries;
  entries.reserve(2 * nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    entries.push_back({nodes[i].point, static_cast<int>(i), 1});
    entries.push_back({-nodes[i].point, static_cast<int>(i), -1});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.p.z() < b.p.z(); });

  double best_chord = std::numeric_limits<double>::infinity();
  int best_a = -1, best_b = -1;
  bool best_antipodal = false;
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size() && entries[j].p.z() - entries[i].p.z() <= best_chord; ++j) {
      const Entry& a = entries[i];
      const Entry& b = entries[j];
      if (a.word == b.word) continue;
      const double chord = (a.p - b.p).norm();
      if (a.sign == b.sign && chord < 1e-13)
        throw std::runtime_error("min_orbit_separation: orbit collision between words " +
                                 word_to_string(letters_of(a.word)) + " and " + word_to_string(letters_of(b.word)));
      if (chord < best_chord) {
        best_chord = chord;
        best_a = a.word;
        best_b = b.word;
        best_antipodal = a.sign != b.sign;
      }
    }
  if (best_a >= 0) {
    result.distance = 2.0 * std::asin(std::min(1.0, 0.5 * best_chord));
    result.antipodal = best_antipodal;
    result.word_a = word_to_string(letters_of(best_a));
    result.word_b = word_to_string(letters_of(best_b));
  }
  return result;
}

bool separation_exceeds(const OrbitSeparation& sep, int s) {
  if (s < 1) throw std::invalid_argument("separation_exceeds: need s >= 1");
  return sep.distance > 1.0 / std::sqrt(static_cast<double>(s));
}

std::vector<Eigen::Vector3d> fixed_point_set(const RotationSet& rots, int max_length, std::size_t budget) {
  const WordTable t = word_table(rots, max_length, budget);
  std::vector<Eigen::Vector3d> points;
  points.reserve(2 * t.words.size());
  for (const Word& w : t.words) {
    if (w.angle < 1e-12) continue;
    const Eigen::Vector3d axis = rotation_axis(w.matrix);
    points.push_back(axis);
    points.push_back(-axis);
  }
  return points;
}

double bad_set_fraction_bound(std::size_t n_points, int s) {
  if (s < 1) throw std::invalid_argument("bad_set_fraction_bound: need s >= 1");
  const double radius = std::pow(static_cast<double>(s), -0.25);
  const double cap = 0.5 * (1.0 - std::cos(radius));
  return std::min(1.0, static_cast<double>(n_points) * cap);
}

double bad_set_fraction_estimate(const std::vector<Eigen::Vector3d>& points, int s, int samples, std::uint64_t seed) {
  if (s < 1 || samples < 1) throw std::invalid_argument("bad_set_fraction_estimate: need s >= 1 and samples >= 1");
  const double cos_r = std::cos(std::pow(static_cast<double>(s), -0.25));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const Eigen::Vector3d u = Eigen::Vector3d(normal(rng), normal(rng), normal(rng)).normalized();
    for (const auto& p : points)
      if (u.dot(p) >= cos_r) {
        ++hits;
        break;
      }
  }
  return static_cast<double>(hits) / samples;
}

}  // namespace ergolab::sphere
