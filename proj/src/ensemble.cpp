#include "surflab/ensemble.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>

#include "surflab/error.hpp"

namespace surflab {

std::vector<std::vector<double>> run_samples(std::int64_t n, const SampleJob& job, int workers) {
  std::vector<std::vector<double>> rows(std::max<std::int64_t>(n, 0));
  std::vector<std::exception_ptr> errs(rows.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      rows[i] = job(i);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::vector<std::vector<double>> run_samples_serial(std::int64_t n, const SampleJob& job) {
  std::vector<std::vector<double>> rows;
  rows.reserve(std::max<std::int64_t>(n, 0));
  for (std::int64_t i = 0; i < n; ++i) rows.push_back(job(i));
  return rows;
}

ColumnStats column_stats(const std::vector<std::vector<double>>& rows) {
  ColumnStats s;
  s.n = static_cast<std::int64_t>(rows.size());
  if (rows.empty()) return s;
  const std::size_t m = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != m) throw Error(ErrorCode::ShapeMismatch, "ensemble rows differ in length");
  s.mean.assign(m, 0.0);
  s.se.assign(m, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < m; ++j) s.mean[j] += r[j];
  for (double& v : s.mean) v /= static_cast<double>(s.n);
  if (s.n < 2) return s;
  for (const auto& r : rows)
    for (std::size_t j = 0; j < m; ++j) s.se[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
  for (double& v : s.se) v = std::sqrt(v / static_cast<double>(s.n - 1) / static_cast<double>(s.n));
  return s;
}

std::vector<double> positive_fraction(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  std::vector<double> f(rows.front().size(), 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < f.size(); ++j) f[j] += r[j] > 0.0 ? 1.0 : 0.0;
  for (double& v : f) v /= static_cast<double>(rows.size());
  return f;
}

namespace {

// P(X <= k) for X ~ Binomial(n, p), summed in log space.
double binom_cdf(std::int64_t k, std::int64_t n, double p) {
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return k >= n ? 1.0 : 0.0;
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  double s = 0.0;
  for (std::int64_t i = 0; i <= k; ++i)
    s += std::exp(lgn - std::lgamma(i + 1.0) - std::lgamma(static_cast<double>(n - i) + 1.0) + i * lp + (n - i) * lq);
  return std::min(1.0, s);
}

}  // namespace

double clopper_pearson_upper(std::int64_t k, std::int64_t n, double confidence) {
  if (n <= 0 || k < 0 || k > n || !(confidence > 0.0 && confidence < 1.0))
    throw Error(ErrorCode::InvalidParam, "Clopper-Pearson needs 0 <= k <= n, n > 0, confidence in (0,1)");
  const double alpha = 1.0 - confidence;
  if (k == n) return 1.0;
  if (k == 0) return 1.0 - std::pow(alpha, 1.0 / static_cast<double>(n));
  double lo = static_cast<double>(k) / static_cast<double>(n), hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binom_cdf(k, n, mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) throw Error(ErrorCode::TooFewPoints, "line fit needs two or more points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::TooFewPoints, "line fit needs two distinct abscissae");
  LineFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace surflab
