#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "core/empirical.hpp"

namespace rcf {

// Ex-ante appraisal of a candidate project: capital cost at t = 0, a constant
// annual benefit over the horizon, and the appraisal discount rate.
struct AppraisalInput {
  double forecast_cost = 0.0;           // > 0
  double forecast_annual_benefit = 0.0; // > 0
  int horizon_years = 0;                // >= 1
  double discount_rate = 0.0;           // > -1
};

void validate(const AppraisalInput& a);

// Present value of cashflows[t] at t = 0, 1, 2, ...
double npv(std::span<const double> cashflows, double rate);

// Internal rate of return by bisection on [-0.99, 10.0] to 1e-9; nullopt when
// the NPV has no sign change over that bracket.
std::optional<double> irr(std::span<const double> cashflows);

// Benefit/cost ratio implied by the appraisal itself.
double forecast_bcr(const AppraisalInput& a);

// How forecasts turn into outcomes. Cost overrun is a percent (distributions
// hold observed overruns); the benefit side is either a constant multiplier
// applied directly, or a distribution of traffic inaccuracies mapped through
// multiplier = 1 + inaccuracy/100. `paired` resamples observed
// (overrun, inaccuracy) pairs and needs `pairs` to be filled.
enum class Dependence { independent, paired };

struct RealizationModel {
  std::variant<double, EmpiricalDistribution> cost_overrun_pct{0.0};
  std::variant<double, EmpiricalDistribution> benefit_source{1.0};  // factor | inaccuracy dist
  Dependence dependence = Dependence::independent;
  std::vector<std::pair<double, double>> pairs;  // (overrun pct, traffic inaccuracy pct)
};

struct ViabilityReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double forecast_bcr = 0.0;
  double bcr_mean = 0.0;
  double npv_mean = 0.0;
  std::map<double, double> bcr_quantiles;  // fixed grid 0.05..0.95
  std::map<double, double> npv_quantiles;
  std::optional<double> irr_estimate;      // nullopt = undefined
  double p_nonviable = 0.0;                // fraction of samples with BCR < 1
};

// Deterministic single-scenario evaluation (realized overrun and benefit
// multiplier known). benefit_factor must be > 0.
ViabilityReport ex_post_evaluate(const AppraisalInput& a, double overrun_pct,
                                 double benefit_factor);

// Monte Carlo over the realization model. Sample i draws only from stream
// (seed, i), so the result is bit-identical for any thread count.
// samples >= 100; threads <= 0 picks a hardware-based default.
ViabilityReport monte_carlo_viability(const AppraisalInput& a, const RealizationModel& model,
                                      std::size_t samples, std::uint64_t seed,
                                      int threads = 0);

}  // namespace rcf
