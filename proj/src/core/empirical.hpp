#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rcf {

// Empirical distribution of inaccuracy observations (percent). Values are
// kept sorted; quantiles interpolate linearly between order statistics and
// never extrapolate beyond the observed min/max.
class EmpiricalDistribution {
 public:
  // Takes n >= 2 finite values (throws DomainError otherwise). Sorts.
  explicit EmpiricalDistribution(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  double mean() const;

  // Fraction of observations <= x.
  double ecdf(double x) const;

  // Linear interpolation of order statistics: with h = (n-1)q and i = floor(h),
  // returns v[i] + (h-i) * (v[i+1] - v[i]) (0-based). q must be in [0, 1].
  double quantile(double q) const;

  // Smallest order statistic u with #(values > u) <= floor(p_exceed * n),
  // floored at the sample minimum. Used for guarantee-style uplifts.
  double upper_order_statistic(double p_exceed) const;

 private:
  std::vector<double> values_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class BootstrapStatistic { mean, quantile };

// Percentile-bootstrap confidence interval for the mean or a quantile.
// Deterministic: replicate r draws its resample through stream (seed, r).
// Requires n >= 5 and replicates >= 100.
Interval bootstrap_ci(const EmpiricalDistribution& dist, BootstrapStatistic stat,
                      double q, double level, std::size_t replicates,
                      std::uint64_t seed);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

// Equal-width bins over [min, max]; the final bin is closed on the right.
std::vector<HistogramBin> histogram(const EmpiricalDistribution& dist, std::size_t bins);

}  // namespace rcf
