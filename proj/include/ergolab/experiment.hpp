#ifndef ERGOLAB_EXPERIMENT_HPP
#define ERGOLAB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergolab/config.hpp"

namespace ergolab::exp {

/// Output of one sweep point: CSV rows in the run's column layout plus a
/// JSON summary. A point whose computation threw is flagged and carries the
/// message.
struct PointResult {
  std::vector<std::vector<std::string>> rows;
  nlohmann::json summary = nlohmann::json::object();
  bool flagged = false;
  std::string error;
  /// Rows for auxiliary tables, keyed by file suffix.
  std::map<std::string, std::vector<std::vector<std::string>>> extra_rows;
};

/// An auxiliary CSV written next to the main one (for example the
/// eigenvalues of a Kesten-McKay run).
struct ExtraTable {
  std::string suffix;  // file is <stem>_<suffix>.csv
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunRecord {
  std::string config_hash;  // FNV-1a 64 of the config text, hex
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::string> header;
  std::vector<PointResult> points;  // in sweep order
  std::vector<ExtraTable> extras;
  std::vector<std::filesystem::path> files;

  int flagged_count() const;
  std::vector<std::vector<std::string>> rows() const;
};

std::string fnv1a_hex(const std::string& text);
std::string version_string();

/// "%.17g" for finite values; "nan", "inf" and "-inf" otherwise.
std::string format_number(double v);
/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);
std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

/// Worker count: ERGOLAB_THREADS when set to a positive integer, else the
/// hardware concurrency.
int worker_count();

/// Writes `text` to `path` through a temporary file in the same directory
/// and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& text);

/// Validates, runs every sweep point on a bounded worker pool and, when
/// `write_files` is set, writes <output>/<stem>.csv and <stem>.json (plus any
/// extra tables) atomically. Throws ConfigError when validation reports
/// errors. Wall time appears only in the JSON so reruns give identical CSV
/// bytes.
RunRecord run(const ExperimentConfig& config, bool write_files = true);

/// Seed of a sweep point, mixed from the run seed and the point's indices.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace ergolab::exp

#endif  // ERGOLAB_EXPERIMENT_HPP
