#ifndef ERGOLAB_HISTOGRAM_HPP
#define ERGOLAB_HISTOGRAM_HPP

#include <istream>
#include <ostream>
#include <vector>

namespace ergolab::exp {

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double empirical = 0.0;   // fraction of the eigenvalues in the bin
  double plancherel = 0.0;  // Plancherel mass of [lo, hi]
};

/// Equal-width bins over [min(-2, min eig), max(2, max eig)]. The last bin is
/// closed on the right. An empty list gives an all-zero empirical column.
/// Throws std::invalid_argument for bins < 2 or q < 2.
std::vector<HistogramBin> emit_histogram(const std::vector<double>& eigenvalues, int bins, int q);

/// Columns bin_lo, bin_hi, empirical, plancherel.
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

/// sup_x |F_emp(x) - F_plancherel(x)| over the jump points of the empirical CDF.
double ks_distance(std::vector<double> eigenvalues, int q);

/// Reads one eigenvalue per row. A header row is allowed; the column named
/// "lambda" or "eigenvalue" is used when present, else the first one.
/// Throws std::runtime_error on a non-numeric entry.
std::vector<double> read_eigenvalues_csv(std::istream& in);

}  // namespace ergolab::exp

#endif  // ERGOLAB_HISTOGRAM_HPP
