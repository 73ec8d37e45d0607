#include "core/forecast.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace rcf {

double required_uplift(const EmpiricalDistribution& dist, double acceptable_risk) {
  if (acceptable_risk <= 0.0)
    throw DomainError("acceptable risk must be > 0: zero risk would require an "
                      "uplift beyond the sample maximum");
  if (acceptable_risk > 1.0) throw DomainError("acceptable risk must be <= 1");
  const double interpolated = dist.quantile(1.0 - acceptable_risk);
  const double guaranteed = dist.upper_order_statistic(acceptable_risk);
  return std::max(interpolated, guaranteed);
}

UpliftSchedule uplift_schedule(const EmpiricalDistribution& dist,
                               std::span<const double> risk_grid, std::string source) {
  if (risk_grid.empty()) throw DomainError("uplift schedule needs a non-empty risk grid");
  UpliftSchedule sched;
  sched.source = std::move(source);
  sched.points.reserve(risk_grid.size());
  for (double r : risk_grid) sched.points.push_back({r, required_uplift(dist, r)});
  std::sort(sched.points.begin(), sched.points.end(),
            [](const UpliftPoint& a, const UpliftPoint& b) {
              return a.acceptable_risk > b.acceptable_risk;
            });
  return sched;
}

ForecastAdjustment reference_class_forecast(double base_estimate,
                                            const EmpiricalDistribution& dist,
                                            double acceptable_risk, double coverage,
                                            std::string class_id) {
  if (!(base_estimate > 0.0)) throw DomainError("base estimate must be > 0");
  if (!(coverage > 0.0 && coverage < 1.0)) throw DomainError("coverage must be in (0, 1)");

  ForecastAdjustment f;
  f.base_estimate = base_estimate;
  f.acceptable_risk = acceptable_risk;
  f.uplift_pct = required_uplift(dist, acceptable_risk);
  f.adjusted_estimate = base_estimate * (1.0 + f.uplift_pct / 100.0);
  f.coverage = coverage;
  const double tail = (1.0 - coverage) / 2.0;
  f.interval.lo = base_estimate * (1.0 + dist.quantile(tail) / 100.0);
  f.interval.hi = base_estimate * (1.0 + dist.quantile(1.0 - tail) / 100.0);
  f.class_median_pct = dist.quantile(0.5);
  f.median_adjusted_estimate = base_estimate * (1.0 + f.class_median_pct / 100.0);
  f.reference_class = std::move(class_id);
  f.class_size = dist.size();
  return f;
}

}  // namespace rcf
