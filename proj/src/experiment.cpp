#include "ergolab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "ergolab/arc_graph.hpp"
#include "ergolab/graph.hpp"
#include "ergolab/graph_spectrum.hpp"
#include "ergolab/harmonics.hpp"
#include "ergolab/histogram.hpp"
#include "ergolab/rotations.hpp"
#include "ergolab/spectral_core.hpp"
#include "ergolab/sphere_spectrum.hpp"
#include "ergolab/words.hpp"

#ifndef ERGOLAB_VERSION
#define ERGOLAB_VERSION "unknown"
#endif

namespace ergolab::exp {

namespace {

using Rows = std::vector<std::vector<std::string>>;

// 1/0.09 rounded up
constexpr double kVarianceConstant = 11.12;

struct Task {
  std::vector<std::string> prefix;  // leading columns of a flagged row
  std::function<PointResult()> compute;
};

struct Sweep {
  std::vector<std::string> header;
  std::vector<Task> tasks;
  std::vector<std::pair<std::string, std::vector<std::string>>> extra_headers;
};

struct GraphSource {
  int k = 0;
  int instance = 0;
  std::optional<std::filesystem::path> file;
};

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "1" : "0"; }

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<GraphSource> graph_sources(const ExperimentConfig& cfg) {
  std::vector<GraphSource> out;
  if (!cfg.graph_files.empty()) {
    for (const auto& f : cfg.graph_files) out.push_back({0, 0, f});
    return out;
  }
  for (int k : sorted_unique(cfg.sizes))
    for (int i = 0; i < cfg.instances; ++i) out.push_back({k, i, std::nullopt});
  return out;
}

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(v); }

graph::Graph make_graph(const ExperimentConfig& cfg, const GraphSource& src) {
  if (src.file) return graph::load_graph(*src.file);
  return graph::random_regular(src.k, cfg.q, point_seed(cfg.seed, u64(src.k), u64(src.instance)));
}

std::vector<std::string> graph_prefix(const ExperimentConfig& cfg, const GraphSource& src) {
  if (src.file) return {"", "", src.file->filename().string()};
  return {num(src.k), num(cfg.q), num(src.instance)};
}

sphere::RotationSet rotation_set(const ExperimentConfig& cfg) {
  return cfg.rotation_file ? sphere::load_rotation_set(*cfg.rotation_file) : sphere::RotationSet::default_set();
}

Sweep graph_variance(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"k", "q", "instance", "observable", "T", "variance", "hs_sq_over_k", "bound", "holds", "beta",
               "alpha_R", "status"};
  const auto times = sorted_unique(cfg.times);
  for (const auto& src : graph_sources(cfg)) {
    sw.tasks.push_back({graph_prefix(cfg, src), [cfg, src, times] {
      const graph::Graph g = make_graph(cfg, src);
      const int k = g.size();
      const auto es = graph::eigensystem(g);
      const double beta = graph::spectral_gap(es);
      const double alpha = graph::bst_profile(g, cfg.radius).alpha(cfg.radius);
      const bool half = cfg.observable.type == "half";
      const int count = half ? 1 : cfg.observable.count;
      PointResult pr;
      int violations = 0;
      for (int o = 0; o < count; ++o) {
        const graph::Observable a =
            half ? graph::Observable::half_split(k)
                 : graph::Observable::random_mean_zero(k, point_seed(cfg.seed, u64(src.k), u64(src.instance), u64(o) + 1));
        const double var = graph::quantum_variance(es, a);
        for (int T : times) {
          const double hs = graph::time_averaged_hs_norm(es, a, T);
          const double hs2 = hs * hs / k;
          const bool holds = var <= kVarianceConstant * hs2;
          if (!holds) ++violations;
          pr.rows.push_back({num(k), num(g.q()), num(src.instance), num(o), num(T), num(var), num(hs2),
                             num(kVarianceConstant * hs2), flag(holds), num(beta), num(alpha), "ok"});
        }
      }
      pr.summary = {{"k", k}, {"q", g.q()}, {"instance", src.instance}, {"beta", beta}, {"alpha_R", alpha},
                    {"violations", violations}};
      return pr;
    }});
  }
  return sw;
}

Sweep graph_kesten_mckay(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"k", "q", "instance", "n_eigs", "ks_distance", "count_in_interval", "ratio", "target", "status"};
  sw.extra_headers = {{"eigs", {"k", "instance", "lambda"}},
                      {"hist", {"k", "instance", "bin_lo", "bin_hi", "empirical", "plancherel"}}};
  for (const auto& src : graph_sources(cfg)) {
    sw.tasks.push_back({graph_prefix(cfg, src), [cfg, src] {
      const graph::Graph g = make_graph(cfg, src);
      const int k = g.size();
      const int q = g.q();
      const Eigen::VectorXd all = graph::eigenvalues(g);
      // ascending, so the trivial eigenvalue is last
      const std::vector<double> eigs(all.data(), all.data() + all.size() - 1);
      const double ks = ks_distance(eigs, q);
      const auto inside = static_cast<std::size_t>(std::count_if(
          eigs.begin(), eigs.end(), [&](double x) { return x >= cfg.interval_lo && x <= cfg.interval_hi; }));
      const double ratio = static_cast<double>(inside) / static_cast<double>(eigs.size());
      const double target = spectral::plancherel_mass(q, cfg.interval_lo, cfg.interval_hi);
      PointResult pr;
      pr.rows.push_back({num(k), num(q), num(src.instance), num(eigs.size()), num(ks), num(inside), num(ratio),
                         num(target), "ok"});
      auto& er = pr.extra_rows["eigs"];
      for (double x : eigs) er.push_back({num(k), num(src.instance), num(x)});
      auto& hr = pr.extra_rows["hist"];
      for (const auto& b : emit_histogram(eigs, cfg.bins, q))
        hr.push_back({num(k), num(src.instance), num(b.lo), num(b.hi), num(b.empirical), num(b.plancherel)});
      pr.summary = {{"k", k}, {"q", q}, {"instance", src.instance}, {"ks_distance", ks}, {"ratio", ratio},
                    {"target", target}};
      return pr;
    }});
  }
  return sw;
}

Sweep nb_decay(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"k", "q", "instance", "step", "norm", "beta", "slope", "status"};
  for (const auto& src : graph_sources(cfg)) {
    sw.tasks.push_back({graph_prefix(cfg, src), [cfg, src] {
      const graph::Graph g = make_graph(cfg, src);
      const int k = g.size();
      const double beta = k <= graph::kDefaultDenseLimit ? graph::spectral_gap(graph::eigenvalues(g), g.q())
                                                         : std::numeric_limits<double>::quiet_NaN();
      const auto norms = graph::nb_norm_decay(graph::arc_graph(g), g.q(), cfg.kmax);
      double slope = std::numeric_limits<double>::quiet_NaN();
      if (norms.size() >= 3 && std::all_of(norms.begin() + 1, norms.end(), [](double n) { return n > 0.0; }))
        slope = graph::decay_slope(norms);
      PointResult pr;
      for (std::size_t step = 0; step < norms.size(); ++step)
        pr.rows.push_back({num(k), num(g.q()), num(src.instance), num(step), num(norms[step]), num(beta), num(slope),
                           "ok"});
      pr.summary = {{"k", k}, {"q", g.q()}, {"instance", src.instance}, {"beta", beta}, {"slope", slope}};
      return pr;
    }});
  }
  return sw;
}

Sweep sphere_variance(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"s", "T", "variance", "hs_sq_over_dim", "bound", "holds", "window_count", "window_variance", "gap",
               "status"};
  sw.extra_headers = {{"diag", {"s", "j", "lambda", "diag_element"}}};
  const auto times = sorted_unique(cfg.times);
  const auto rots = std::make_shared<const sphere::RotationSet>(rotation_set(cfg));
  for (int s : sorted_unique(cfg.sizes)) {
    sw.tasks.push_back({{num(s)}, [cfg, s, times, rots] {
      const auto jb = sphere::joint_basis(s, *rots);
      const auto a = sphere::SphereFunction::expansion(sphere::real_harmonic(cfg.observable.l, cfg.observable.m));
      const Eigen::MatrixXcd m = sphere::matrix_element_operator(sphere::HarmonicSpace(s, cfg.observable.l), a);
      const double var = sphere::quantum_variance_sphere(jb, m);
      const double gap = sphere::sphere_gap(jb);
      const auto window = sphere::variance_in_window(jb, m, cfg.interval_lo, cfg.interval_hi);
      const double wvar = window.variance.value_or(std::numeric_limits<double>::quiet_NaN());
      PointResult pr;
      int violations = 0;
      for (int T : times) {
        const double hs = sphere::time_averaged_hs_norm(jb, m, T);
        const double hs2 = hs * hs / jb.dim();
        const bool holds = var <= kVarianceConstant * hs2;
        if (!holds) ++violations;
        pr.rows.push_back({num(s), num(T), num(var), num(hs2), num(kVarianceConstant * hs2), flag(holds),
                           num(window.count), num(wvar), num(gap), "ok"});
      }
      const Eigen::VectorXcd diag = sphere::sphere_diagonal_elements(jb, m);
      auto& dr = pr.extra_rows["diag"];
      for (int j = 0; j < jb.dim(); ++j) dr.push_back({num(s), num(j), num(jb.values[j]), num(diag[j].real())});
      pr.summary = {{"s", s}, {"variance", var}, {"gap", gap}, {"violations", violations}};
      return pr;
    }});
  }
  return sw;
}

Sweep sphere_kesten_mckay(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"s", "count", "dim", "ratio", "target", "status"};
  const auto rots = std::make_shared<const sphere::RotationSet>(rotation_set(cfg));
  for (int s : sorted_unique(cfg.sizes)) {
    sw.tasks.push_back({{num(s)}, [cfg, s, rots] {
      const auto row = sphere::kesten_mckay_empirical({s}, *rots, cfg.interval_lo, cfg.interval_hi).front();
      PointResult pr;
      pr.rows.push_back({num(s), num(row.count), num(row.dim), num(row.ratio), num(row.target), "ok"});
      pr.summary = {{"s", s}, {"ratio", row.ratio}, {"target", row.target}};
      return pr;
    }});
  }
  return sw;
}

Sweep word_angles(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"length", "count", "min_angle", "collisions", "status"};
  sw.tasks.push_back({{""}, [cfg] {
    const auto table = sphere::word_table(rotation_set(cfg), cfg.max_length);
    PointResult pr;
    std::size_t total_collisions = 0;
    for (int l = 1; l <= table.max_length; ++l) {
      const std::size_t begin = table.offsets[l - 1], end = table.offsets[l];
      const auto collisions = static_cast<std::size_t>(std::count_if(
          table.collisions.begin(), table.collisions.end(), [&](std::size_t i) { return i >= begin && i < end; }));
      total_collisions += collisions;
      pr.rows.push_back({num(l), num(end - begin), num(table.min_angle[l - 1]), num(collisions), "ok"});
    }
    pr.summary = {{"max_length", table.max_length}, {"words", table.words.size()}, {"collisions", total_collisions}};
    return pr;
  }});
  return sw;
}

Sweep moment_check(const ExperimentConfig& cfg) {
  Sweep sw;
  sw.header = {"s", "n", "moment", "target", "error", "tolerance", "within", "status"};
  const auto moments = sorted_unique(cfg.moments);
  const auto rots = std::make_shared<const sphere::RotationSet>(rotation_set(cfg));
  for (int s : sorted_unique(cfg.sizes)) {
    sw.tasks.push_back({{num(s)}, [s, moments, rots] {
      const Eigen::MatrixXcd tq = sphere::tq_on_hs(s, *rots);
      const int q = rots->q();
      PointResult pr;
      for (int n : moments) {
        const double moment = sphere::moment_trace(tq, n) / (2 * s + 1);
        const double walks = static_cast<double>(spectral::tree_closed_walks(q, n));
        const double target = walks * std::pow(static_cast<double>(q), -0.5 * n);
        const double err = std::abs(moment - target);
        const double tol = 0.1 * target + 0.05;
        pr.rows.push_back({num(s), num(n), num(moment), num(target), num(err), num(tol), flag(err <= tol), "ok"});
      }
      pr.summary = {{"s", s}};
      return pr;
    }});
  }
  return sw;
}

Sweep build_sweep(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::GraphVariance: return graph_variance(cfg);
    case ExperimentKind::GraphKestenMcKay: return graph_kesten_mckay(cfg);
    case ExperimentKind::NbDecay: return nb_decay(cfg);
    case ExperimentKind::SphereVariance: return sphere_variance(cfg);
    case ExperimentKind::SphereKestenMcKay: return sphere_kesten_mckay(cfg);
    case ExperimentKind::WordAngles: return word_angles(cfg);
    case ExperimentKind::MomentCheck: return moment_check(cfg);
  }
  throw ConfigError("unknown experiment kind");
}

PointResult flagged_point(const Sweep& sw, const Task& task, const std::string& message) {
  PointResult pr;
  pr.flagged = true;
  pr.error = message;
  std::vector<std::string> row(sw.header.size());
  std::copy_n(task.prefix.begin(), std::min(task.prefix.size(), row.size() - 1), row.begin());
  row.back() = "error: " + message;
  pr.rows.push_back(std::move(row));
  pr.summary = {{"error", message}};
  return pr;
}

}  // namespace

int RunRecord::flagged_count() const {
  return static_cast<int>(std::count_if(points.begin(), points.end(), [](const PointResult& p) { return p.flagged; }));
}

std::vector<std::vector<std::string>> RunRecord::rows() const {
  Rows out;
  for (const auto& p : points) out.insert(out.end(), p.rows.begin(), p.rows.end());
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string version_string() { return ERGOLAB_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  const auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

int worker_count() {
  if (const char* env = std::getenv("ERGOLAB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min(n, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 finalizer over a running combination
  const auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (std::uint64_t v : {a, b, c}) h = mix(h ^ v);
  return h;
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

RunRecord run(const ExperimentConfig& config, bool write_files) {
  const auto diags = validate(config);
  if (has_errors(diags)) {
    std::string msg = "invalid config:";
    for (const auto& d : diags)
      if (d.is_error()) msg += "\n  " + d.message;
    throw ConfigError(msg);
  }

  const auto start = std::chrono::steady_clock::now();
  const Sweep sw = build_sweep(config);
  RunRecord rec;
  rec.config_hash = fnv1a_hex(config.source_text);
  rec.version = version_string();
  rec.header = sw.header;
  rec.points.resize(sw.tasks.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < sw.tasks.size();) {
      try {
        rec.points[i] = sw.tasks[i].compute();
      } catch (const std::exception& e) {
        rec.points[i] = flagged_point(sw, sw.tasks[i], e.what());
      }
    }
  };
  {
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), sw.tasks.size());
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
  }

  for (const auto& [suffix, header] : sw.extra_headers) {
    ExtraTable t{suffix, header, {}};
    for (const auto& p : rec.points)
      if (auto it = p.extra_rows.find(suffix); it != p.extra_rows.end())
        t.rows.insert(t.rows.end(), it->second.begin(), it->second.end());
    rec.extras.push_back(std::move(t));
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!write_files) return rec;

  std::filesystem::create_directories(config.output_dir);
  const std::string stem = config.stem();
  std::vector<std::pair<std::filesystem::path, std::string>> outputs;
  outputs.emplace_back(config.output_dir / (stem + ".csv"), csv_text(rec.header, rec.rows()));
  for (const auto& t : rec.extras)
    outputs.emplace_back(config.output_dir / (stem + "_" + t.suffix + ".csv"), csv_text(t.header, t.rows));

  nlohmann::json j;
  j["kind"] = kind_name(config.kind);
  j["config_hash"] = rec.config_hash;
  j["version"] = rec.version;
  j["seed"] = config.seed;
  j["wall_seconds"] = rec.wall_seconds;
  j["points"] = rec.points.size();
  j["flagged"] = rec.flagged_count();
  j["warnings"] = nlohmann::json::array();
  for (const auto& d : diags) j["warnings"].push_back(d.message);
  j["results"] = nlohmann::json::array();
  for (const auto& p : rec.points) j["results"].push_back(p.summary);
  j["files"] = nlohmann::json::array();
  for (const auto& [path, text] : outputs) j["files"].push_back(path.filename().string());
  outputs.emplace_back(config.output_dir / (stem + ".json"), j.dump(2) + "\n");

  for (const auto& [path, text] : outputs) {
    write_atomically(path, text);
    rec.files.push_back(path);
  }
  return rec;
}

}  // namespace ergolab::exp
