#include "ergolab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ergolab/graph.hpp"
#include "ergolab/graph_spectrum.hpp"
#include "ergolab/rotations.hpp"
#include "ergolab/words.hpp"

namespace ergolab::exp {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"experiment", {"kind", "seed", "output", "name"}},
      {"sweep", {"k", "s", "q", "T", "interval", "R", "kmax", "moments", "L", "bins", "instances"}},
      {"observable", {"type", "count", "l", "m"}},
      {"rotations", {"file"}},
      {"graphs", {"files"}},
  };
  return keys;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = boost::trim_copy(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::logic_error&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  if (used != t.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = boost::trim_copy(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::logic_error&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& p : parts) boost::trim(p);
  parts.erase(std::remove(parts.begin(), parts.end(), ""), parts.end());
  return parts;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(boost::trim_copy(p));
  return path.is_absolute() ? path : base / path;
}

void error(std::vector<Diagnostic>& out, std::string msg) {
  out.push_back({Diagnostic::Severity::Error, std::move(msg)});
}

void warning(std::vector<Diagnostic>& out, std::string msg) {
  out.push_back({Diagnostic::Severity::Warning, std::move(msg)});
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::GraphVariance: return "graph-variance";
    case ExperimentKind::GraphKestenMcKay: return "graph-kesten-mckay";
    case ExperimentKind::NbDecay: return "nb-decay";
    case ExperimentKind::SphereVariance: return "sphere-variance";
    case ExperimentKind::SphereKestenMcKay: return "sphere-kesten-mckay";
    case ExperimentKind::WordAngles: return "word-angles";
    case ExperimentKind::MomentCheck: return "moment-check";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& name) {
  for (auto kind : {ExperimentKind::GraphVariance, ExperimentKind::GraphKestenMcKay, ExperimentKind::NbDecay,
                    ExperimentKind::SphereVariance, ExperimentKind::SphereKestenMcKay, ExperimentKind::WordAngles,
                    ExperimentKind::MomentCheck})
    if (kind_name(kind) == name) return kind;
  return std::nullopt;
}

bool is_graph_kind(ExperimentKind kind) {
  return kind == ExperimentKind::GraphVariance || kind == ExperimentKind::GraphKestenMcKay ||
         kind == ExperimentKind::NbDecay;
}

bool is_sphere_kind(ExperimentKind kind) { return !is_graph_kind(kind); }

std::string ExperimentConfig::stem() const { return name.empty() ? kind_name(kind) : name; }

std::vector<int> parse_int_list(const std::string& text) {
  const std::string t = boost::trim_copy(text);
  if (t.empty()) throw ConfigError("empty list");
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    boost::split(parts, t, boost::is_any_of(":"));
    if (parts.size() != 3) throw ConfigError("range must be lo:hi:step, got '" + text + "'");
    const int lo = to_int("range", parts[0]), hi = to_int("range", parts[1]), step = to_int("range", parts[2]);
    if (step <= 0) throw ConfigError("range step must be positive, got '" + text + "'");
    if (hi < lo) throw ConfigError("range is empty: '" + text + "'");
    std::vector<int> out;
    for (long long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
    return out;
  }
  std::vector<int> out;
  for (const auto& part : split_list(t)) out.push_back(to_int("list", part));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig cfg;
  cfg.source_text = buffer.str();

  pt::ptree tree;
  try {
    std::istringstream text(cfg.source_text);
    pt::read_ini(text, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) throw ConfigError("key '" + section + "' outside of a section");
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }

  const auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return boost::trim_copy(*v);
    return std::nullopt;
  };

  const auto kind_text = get("experiment.kind");
  if (!kind_text) throw ConfigError("missing [experiment] kind");
  const auto kind = parse_kind(*kind_text);
  if (!kind) throw ConfigError("unknown experiment kind '" + *kind_text + "'");
  cfg.kind = *kind;

  if (auto v = get("experiment.seed")) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(*v, &used);
      if (used != v->size() || v->front() == '-') throw std::invalid_argument("seed");
    } catch (const std::logic_error&) {
      throw ConfigError("experiment.seed: expected a nonnegative integer, got '" + *v + "'");
    }
  }
  if (auto v = get("experiment.output")) cfg.output_dir = resolve(base_dir, *v);
  else cfg.output_dir = base_dir / "results";
  if (auto v = get("experiment.name")) cfg.name = *v;

  const auto k = get("sweep.k"), s = get("sweep.s");
  if (k && s) throw ConfigError("[sweep] sets both k and s");
  if (k) cfg.sizes = parse_int_list(*k);
  if (s) cfg.sizes = parse_int_list(*s);
  if (auto v = get("sweep.q")) cfg.q = to_int("sweep.q", *v);
  if (auto v = get("sweep.T")) cfg.times = parse_int_list(*v);
  if (auto v = get("sweep.interval")) {
    const auto parts = split_list(*v);
    if (parts.size() != 2) throw ConfigError("sweep.interval: expected 'lo,hi', got '" + *v + "'");
    cfg.interval_lo = to_double("sweep.interval", parts[0]);
    cfg.interval_hi = to_double("sweep.interval", parts[1]);
  }
  if (auto v = get("sweep.R")) cfg.radius = to_int("sweep.R", *v);
  if (auto v = get("sweep.kmax")) cfg.kmax = to_int("sweep.kmax", *v);
  if (auto v = get("sweep.moments")) cfg.moments = parse_int_list(*v);
  if (auto v = get("sweep.L")) cfg.max_length = to_int("sweep.L", *v);
  if (auto v = get("sweep.bins")) cfg.bins = to_int("sweep.bins", *v);
  if (auto v = get("sweep.instances")) cfg.instances = to_int("sweep.instances", *v);

  if (is_sphere_kind(cfg.kind)) cfg.observable.type = "harmonic";
  if (auto v = get("observable.type")) cfg.observable.type = *v;
  if (auto v = get("observable.count")) cfg.observable.count = to_int("observable.count", *v);
  if (auto v = get("observable.l")) cfg.observable.l = to_int("observable.l", *v);
  if (auto v = get("observable.m")) cfg.observable.m = to_int("observable.m", *v);

  if (auto v = get("rotations.file")) cfg.rotation_file = resolve(base_dir, *v);
  if (auto v = get("graphs.files"))
    for (const auto& f : split_list(*v)) cfg.graph_files.push_back(resolve(base_dir, f));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  return parse_config(in, base);
}

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  const auto kind = cfg.kind;

  if (cfg.times.empty()) error(out, "T list is empty");
  for (int t : cfg.times)
    if (t < 1) error(out, "T must be >= 1, got " + std::to_string(t));
  if (cfg.instances < 1) error(out, "instances must be >= 1");
  if (cfg.interval_lo > cfg.interval_hi) error(out, "interval lower end exceeds upper end");

  if (is_graph_kind(kind)) {
    if (cfg.graph_files.empty()) {
      if (cfg.q < 2) error(out, "q must be >= 2");
      if (cfg.sizes.empty()) error(out, "sweep needs k values or [graphs] files");
      for (int k : cfg.sizes) {
        if (k <= cfg.q + 1) error(out, "k = " + std::to_string(k) + " must exceed q+1");
        else if ((static_cast<long long>(cfg.q) + 1) * k % 2 != 0)
          error(out, "(q+1)k must be even, got k = " + std::to_string(k));
        if (kind != ExperimentKind::NbDecay && k > graph::kDefaultDenseLimit)
          error(out, "k = " + std::to_string(k) + " exceeds the dense limit " + std::to_string(graph::kDefaultDenseLimit));
      }
    } else {
      if (!cfg.sizes.empty()) warning(out, "k values are ignored when [graphs] files are given");
      for (const auto& f : cfg.graph_files) {
        if (!std::filesystem::exists(f)) {
          error(out, "graph file not found: " + f.string());
          continue;
        }
        try {
          const graph::Graph g = graph::load_graph(f);
          for (const auto& d : graph::validate_experiment_graph(g)) error(out, f.string() + ": " + d);
        } catch (const std::exception& e) {
          error(out, f.string() + ": " + e.what());
        }
      }
    }
    if (kind == ExperimentKind::GraphVariance) {
      if (cfg.observable.type != "random" && cfg.observable.type != "half")
        error(out, "graph observable type must be 'random' or 'half', got '" + cfg.observable.type + "'");
      if (cfg.observable.count < 1) error(out, "observable count must be >= 1");
      if (cfg.observable.type == "half")
        for (int k : cfg.sizes)
          if (k % 2 != 0 && cfg.graph_files.empty()) error(out, "observable 'half' needs even k, got " + std::to_string(k));
      if (cfg.radius < 1) error(out, "R must be >= 1");
      for (int t : cfg.times)
        if (t < 10 && t >= 1) warning(out, "T = " + std::to_string(t) + " is below 10, where the 0.3 weight bound is not guaranteed");
    }
    if (kind == ExperimentKind::NbDecay && cfg.kmax < 1) error(out, "kmax must be >= 1");
    if (kind == ExperimentKind::GraphKestenMcKay && cfg.bins < 2) error(out, "bins must be >= 2");
    return out;
  }

  // sphere kinds
  std::optional<sphere::RotationSet> rots;
  if (cfg.rotation_file) {
    if (!std::filesystem::exists(*cfg.rotation_file)) {
      error(out, "rotation file not found: " + cfg.rotation_file->string());
    } else {
      try {
        rots = sphere::load_rotation_set(*cfg.rotation_file);
      } catch (const std::exception& e) {
        error(out, cfg.rotation_file->string() + ": " + e.what());
      }
    }
  } else {
    rots = sphere::RotationSet::default_set();
  }

  if (kind != ExperimentKind::WordAngles) {
    if (cfg.sizes.empty()) error(out, "sweep needs s values");
    for (int s : cfg.sizes)
      if (s < 0) error(out, "s must be >= 0, got " + std::to_string(s));
  }
  if (kind == ExperimentKind::SphereVariance) {
    if (cfg.observable.type != "harmonic")
      error(out, "sphere observable type must be 'harmonic', got '" + cfg.observable.type + "'");
    if (cfg.observable.l < 1) error(out, "observable degree l must be >= 1 for a mean-zero observable");
    if (std::abs(cfg.observable.m) > cfg.observable.l) error(out, "observable order must satisfy |m| <= l");
    for (int s : cfg.sizes)
      if (s < 1) error(out, "sphere-variance needs s >= 1, got " + std::to_string(s));
  }
  if (kind == ExperimentKind::SphereKestenMcKay && (cfg.interval_lo < -2.0 || cfg.interval_hi > 2.0))
    warning(out, "interval extends beyond the tempered range [-2, 2]");
  if (kind == ExperimentKind::WordAngles) {
    if (cfg.max_length < 1) error(out, "L must be >= 1");
    else if (rots &&
             sphere::reduced_word_count(rots->count(), cfg.max_length) > sphere::kDefaultWordBudget)
      error(out, "L = " + std::to_string(cfg.max_length) + " exceeds the word budget");
  }
  if (kind == ExperimentKind::MomentCheck)
    for (int n : cfg.moments)
      if (n < 0) error(out, "moments must be >= 0");

  // Orbit-separation certification of the injectivity condition at depth
  // min(4T, 8) around a generic point derived from the seed.
  if (kind == ExperimentKind::SphereVariance && rots && !has_errors(out)) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> n01;
    const Eigen::Vector3d x = Eigen::Vector3d(n01(rng), n01(rng), n01(rng)).normalized();
    for (int t : cfg.times) {
      const int depth = std::min(4 * t, 8);
      try {
        const auto sep = sphere::min_orbit_separation(*rots, x, depth);
        for (int s : cfg.sizes)
          if (s >= 1 && !sphere::separation_exceeds(sep, s)) {
            warning(out, "orbit separation " + std::to_string(sep.distance) + " at depth " + std::to_string(depth) +
                             " does not certify s = " + std::to_string(s) + ", T = " + std::to_string(t) +
                             "; closest words " + sep.word_a + " and " + sep.word_b);
            break;
          }
      } catch (const std::runtime_error& e) {
        warning(out, e.what());
      }
    }
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

}  // namespace ergolab::exp
