#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/empirical.hpp"

namespace rcf {

// Percent uplift a budget needs so that, against this reference class, the
// empirical probability of overrunning the uplifted budget is at most
// `acceptable_risk`. This is the interpolated (1 - risk)-quantile, raised
// minimally to the order statistic that makes the exceedance guarantee exact:
// the interpolated quantile alone can land strictly between order statistics
// and leave a fraction > risk above it. acceptable_risk must be in (0, 1];
// risk 0 would require extrapolating beyond the sample maximum and is refused.
double required_uplift(const EmpiricalDistribution& dist, double acceptable_risk);

struct UpliftPoint {
  double acceptable_risk = 0.0;
  double uplift_pct = 0.0;
};

struct UpliftSchedule {
  std::vector<UpliftPoint> points;  // sorted by descending risk
  std::string source;               // reference class identifier
};

// Uplift curve over a grid of risk levels (each in (0, 1], at least one).
UpliftSchedule uplift_schedule(const EmpiricalDistribution& dist,
                               std::span<const double> risk_grid, std::string source);

struct ForecastAdjustment {
  double base_estimate = 0.0;
  double acceptable_risk = 0.0;
  double uplift_pct = 0.0;
  double adjusted_estimate = 0.0;
  double coverage = 0.0;              // central equal-tail interval mass
  Interval interval;                  // money units, same as base_estimate
  double class_median_pct = 0.0;      // "most likely" outcome of the class
  double median_adjusted_estimate = 0.0;
  std::string reference_class;
  std::size_t class_size = 0;
};

// Adjusts a base estimate by the class uplift at `acceptable_risk` and
// reports a central `coverage` interval from the class quantiles.
// base_estimate > 0, risk in (0, 1], coverage in (0, 1).
ForecastAdjustment reference_class_forecast(double base_estimate,
                                            const EmpiricalDistribution& dist,
                                            double acceptable_risk, double coverage,
                                            std::string class_id);

}  // namespace rcf
