#ifndef ERGOLAB_CONFIG_HPP
#define ERGOLAB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergolab::exp {

enum class ExperimentKind {
  GraphVariance,
  GraphKestenMcKay,
  NbDecay,
  SphereVariance,
  SphereKestenMcKay,
  WordAngles,
  MomentCheck,
};

std::string kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& name);
bool is_graph_kind(ExperimentKind kind);
bool is_sphere_kind(ExperimentKind kind);

/// Raised for configs that cannot be parsed at all.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Test function used by the variance experiments.
///   graph:  type = random (uniform, mean removed) or half (+1/-1 split)
///   sphere: type = harmonic, real harmonic of degree l and order m
struct ObservableSpec {
  std::string type = "random";
  int count = 1;  // observables per sweep point (random type only)
  int l = 2;
  int m = 0;
};

/// Declarative experiment description, read from an INI-style file:
///
///   [experiment]  kind, seed, output (directory), name (file stem)
///   [sweep]       k or s (list "a,b,c" or range "lo:hi:step"), q, T (list or
///                 range), interval ("lo,hi"), R, kmax, moments, L, bins, instances
///   [observable]  type, count, l, m
///   [rotations]   file (rotation set; the default set when absent)
///   [graphs]      files (comma separated; replaces generated graphs)
///
/// Relative paths resolve against the directory holding the config file.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::GraphVariance;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "results";
  std::string name;

  std::vector<int> sizes;  // k for graph kinds, s for sphere kinds
  int q = 2;
  std::vector<int> times{10};
  double interval_lo = -1.0;
  double interval_hi = 1.0;
  int radius = 4;
  int kmax = 20;
  std::vector<int> moments{2, 4};
  int max_length = 10;
  int bins = 20;
  int instances = 1;

  ObservableSpec observable;
  std::optional<std::filesystem::path> rotation_file;
  std::vector<std::filesystem::path> graph_files;

  std::string source_text;  // raw file contents, hashed into the run record

  std::string stem() const;
};

/// Parses a config; throws ConfigError on syntax errors, unknown sections or
/// keys and malformed values. Semantic checks live in `validate`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// "a,b,c" or "lo:hi:step" (inclusive) or a single integer.
std::vector<int> parse_int_list(const std::string& text);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;

  bool is_error() const { return severity == Severity::Error; }
};

/// Semantic checks. Errors block `run`; warnings (for example a sphere
/// point whose orbit separation does not certify the injectivity
/// condition) are reported but do not.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

bool has_errors(const std::vector<Diagnostic>& diags);

}  // namespace ergolab::exp

#endif  // ERGOLAB_CONFIG_HPP
