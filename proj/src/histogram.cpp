#include "ergolab/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <boost/algorithm/string.hpp>

#include "ergolab/spectral_core.hpp"

namespace ergolab::exp {

std::vector<HistogramBin> emit_histogram(const std::vector<double>& eigenvalues, int bins, int q) {
  if (bins < 2) throw std::invalid_argument("emit_histogram: need at least 2 bins");
  if (q < 2) throw std::invalid_argument("emit_histogram: q must be >= 2");
  double lo = -2.0, hi = 2.0;
  for (double x : eigenvalues) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].lo = lo + b * width;
    out[b].hi = b + 1 == bins ? hi : lo + (b + 1) * width;
    out[b].plancherel = spectral::plancherel_mass(q, out[b].lo, out[b].hi);
  }
  if (eigenvalues.empty()) return out;
  const double unit = 1.0 / static_cast<double>(eigenvalues.size());
  for (double x : eigenvalues) {
    int b = static_cast<int>(std::floor((x - lo) / width));
    b = std::clamp(b, 0, bins - 1);
    // floating point can put x one bin off near an edge
    if (x < out[b].lo && b > 0) --b;
    else if (x > out[b].hi && b + 1 < bins) ++b;
    out[b].empirical += unit;
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_lo,bin_hi,empirical,plancherel\n";
  char buf[128];
  for (const auto& b : bins) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", b.lo, b.hi, b.empirical, b.plancherel);
    out << buf;
  }
}

double ks_distance(std::vector<double> eigenvalues, int q) {
  if (eigenvalues.empty()) throw std::invalid_argument("ks_distance: no eigenvalues");
  std::sort(eigenvalues.begin(), eigenvalues.end());
  const double n = static_cast<double>(eigenvalues.size());
  double d = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double f = spectral::plancherel_cdf(q, eigenvalues[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

std::vector<double> read_eigenvalues_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t column = 0;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    boost::trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    boost::split(fields, line, boost::is_any_of(","));
    for (auto& f : fields) boost::trim(f);
    if (first) {
      first = false;
      const bool header = std::any_of(fields.begin(), fields.end(), [](const std::string& f) {
        char* end = nullptr;
        std::strtod(f.c_str(), &end);
        return f.empty() || *end != '\0';
      });
      if (header) {
        for (std::size_t i = 0; i < fields.size(); ++i)
          if (fields[i] == "lambda" || fields[i] == "eigenvalue") column = i;
        continue;
      }
    }
    if (column >= fields.size())
      throw std::runtime_error("eigenvalue file line " + std::to_string(line_no) + ": missing column");
    const std::string& f = fields[column];
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (f.empty() || *end != '\0' || !std::isfinite(v))
      throw std::runtime_error("eigenvalue file line " + std::to_string(line_no) + ": not a number: '" + f + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace ergolab::exp
