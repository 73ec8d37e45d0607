#include "core/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

namespace rcf {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.size() < 2)
    throw DomainError("empirical distribution needs at least 2 observations");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("empirical distribution given non-finite value");
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::mean() const { return mean_of(values_); }

double EmpiricalDistribution::ecdf(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must be in [0, 1]");
  const std::size_t n = values_.size();
  const double h = (static_cast<double>(n) - 1.0) * q;
  const std::size_t i = static_cast<std::size_t>(h);
  if (i + 1 >= n) return values_.back();
  return values_[i] + (h - static_cast<double>(i)) * (values_[i + 1] - values_[i]);
}

double EmpiricalDistribution::upper_order_statistic(double p_exceed) const {
  if (!(p_exceed >= 0.0 && p_exceed <= 1.0))
    throw DomainError("exceedance probability must be in [0, 1]");
  const std::size_t n = values_.size();
  const auto allowed = static_cast<std::size_t>(p_exceed * static_cast<double>(n));
  // v[n - allowed] 1-based == index n - allowed - 1 0-based; floor at v[0].
  if (allowed + 1 >= n) return values_.front();
  return values_[n - allowed - 1];
}

Interval bootstrap_ci(const EmpiricalDistribution& dist, BootstrapStatistic stat,
                      double q, double level, std::size_t replicates,
                      std::uint64_t seed) {
  const std::size_t n = dist.size();
  if (n < 5) throw DomainError("too few observations to bootstrap (need n >= 5)");
  if (replicates < 100) throw DomainError("bootstrap needs at least 100 replicates");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must be in (0, 1)");
  if (stat == BootstrapStatistic::quantile && !(q >= 0.0 && q <= 1.0))
    throw DomainError("quantile level must be in [0, 1]");

  const auto& v = dist.values();
  std::vector<double> stats(replicates);
  std::vector<double> resample(n);
  for (std::size_t r = 0; r < replicates; ++r) {
    RngStream rng(seed, stream_id(rng_tag::bootstrap, r));
    for (std::size_t i = 0; i < n; ++i) resample[i] = v[rng.next_below(n)];
    if (stat == BootstrapStatistic::mean) {
      stats[r] = mean_of(resample);
    } else {
      std::sort(resample.begin(), resample.end());
      // same interpolation rule as EmpiricalDistribution::quantile
      const double h = (static_cast<double>(n) - 1.0) * q;
      const std::size_t i = static_cast<std::size_t>(h);
      stats[r] = i + 1 >= n ? resample.back()
                            : resample[i] + (h - static_cast<double>(i)) *
                                                (resample[i + 1] - resample[i]);
    }
  }
  EmpiricalDistribution rep(std::move(stats));
  const double alpha = 1.0 - level;
  return {rep.quantile(alpha / 2.0), rep.quantile(1.0 - alpha / 2.0)};
}

std::vector<HistogramBin> histogram(const EmpiricalDistribution& dist, std::size_t bins) {
  if (bins == 0) throw DomainError("histogram needs at least one bin");
  const double lo = dist.min(), hi = dist.max();
  std::vector<HistogramBin> out(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lo = lo + width * static_cast<double>(b);
    out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : dist.values()) {
    std::size_t b;
    if (width == 0.0) b = 0;  // degenerate: all mass in one bin
    else {
      b = static_cast<std::size_t>((v - lo) / width);
      if (b >= bins) b = bins - 1;  // v == max
    }
    ++out[b].count;
  }
  return out;
}

}  // namespace rcf
