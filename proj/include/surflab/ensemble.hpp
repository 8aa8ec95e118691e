#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace surflab {

/// One ensemble member: a pure function of its index.
using SampleJob = std::function<std::vector<double>(std::int64_t index)>;

/// Rows job(0..n-1) computed on `workers` OpenMP threads (<= 0: all available)
/// and stored by index, so the result never depends on scheduling. The first
/// exception by index is rethrown after all members finish.
std::vector<std::vector<double>> run_samples(std::int64_t n, const SampleJob& job, int workers);

/// Serial reference for run_samples.
std::vector<std::vector<double>> run_samples_serial(std::int64_t n, const SampleJob& job);

/// Per-column mean and standard error of the mean, summed in index order.
struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> se;
  std::int64_t n = 0;
};
ColumnStats column_stats(const std::vector<std::vector<double>>& rows);

/// Fraction of rows with a strictly positive entry, per column.
std::vector<double> positive_fraction(const std::vector<std::vector<double>>& rows);

/// One-sided upper confidence bound for a binomial proportion (Clopper-Pearson)
/// after k successes in n trials.
double clopper_pearson_upper(std::int64_t k, std::int64_t n, double confidence = 0.95);

/// Ordinary least squares y = slope x + intercept. Throws TooFewPoints below two points.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace surflab
