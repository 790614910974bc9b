// ergolab: run, validate and histogram experiments.
//
// Exit codes: 0 ok, 1 flagged sweep points, 2 invalid input.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ergolab/config.hpp"
#include "ergolab/experiment.hpp"
#include "ergolab/histogram.hpp"

namespace {

using namespace ergolab::exp;

void print_diagnostics(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << (d.is_error() ? "error: " : "warning: ") << d.message << '\n';
}

int cmd_validate(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  const auto diags = validate(cfg);
  print_diagnostics(diags);
  if (has_errors(diags)) return 2;
  if (diags.empty()) std::cout << "ok\n";
  return 0;
}

int cmd_run(const std::string& path) {
  const ExperimentConfig cfg = load_config(path);
  const auto diags = validate(cfg);
  print_diagnostics(diags);
  if (has_errors(diags)) return 2;
  const RunRecord rec = run(cfg);
  for (const auto& f : rec.files) std::cout << f.string() << '\n';
  for (const auto& p : rec.points)
    if (p.flagged) std::cerr << "flagged: " << p.error << '\n';
  return rec.flagged_count() > 0 ? 1 : 0;
}

int cmd_hist(const std::string& path, int q, int bins) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open eigenvalue file " + path);
  const auto eigs = read_eigenvalues_csv(in);
  write_histogram_csv(std::cout, emit_histogram(eigs, bins, q));
  if (!eigs.empty()) std::cerr << "ks_distance " << format_number(ks_distance(eigs, q)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum ergodicity experiments on regular graphs and the sphere"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run the sweep described by a config file");
  run_cmd->add_option("config", config_path, "Config file")->required();
  auto* validate_cmd = app.add_subcommand("validate", "Check a config file without running it");
  validate_cmd->add_option("config", config_path, "Config file")->required();

  std::string eigs_path;
  int q = 2, bins = 20;
  auto* hist_cmd = app.add_subcommand("hist", "Histogram of eigenvalues against the Plancherel measure");
  hist_cmd->add_option("eigs", eigs_path, "CSV with one eigenvalue per row")->required();
  hist_cmd->add_option("--q", q, "Branching number")->check(CLI::Range(2, 1 << 20));
  hist_cmd->add_option("--bins", bins, "Number of bins")->check(CLI::Range(2, 1 << 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(config_path);
    if (*validate_cmd) return cmd_validate(config_path);
    if (*hist_cmd) return cmd_hist(eigs_path, q, bins);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
