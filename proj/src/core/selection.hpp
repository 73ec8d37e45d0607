#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/empirical.hpp"
#include "core/types.hpp"

namespace rcf {

// A project as its promoter presents it. True figures are what will actually
// happen; the stated figures are what enters the funding competition.
struct PromoterProject {
  std::string id;
  ProjectType type = ProjectType::other;
  double true_cost = 0.0;     // > 0
  double true_benefit = 0.0;  // discounted total over the life, > 0
  double understatement_pct = 0.0;   // stated_cost = true_cost * (1 - u/100); u < 100
  double benefit_bias_pct = 0.0;     // stated_benefit = true_benefit * (1 + b/100); b > -100
  double private_capital_share = 0.0;  // fraction of capital at risk without guarantee
};

double stated_cost(const PromoterProject& p);
double stated_benefit(const PromoterProject& p);
// Stated benefit/cost ratio — what a naive appraisal sees.
double stated_appraisal(const PromoterProject& p);
double true_bcr(const PromoterProject& p);

// Accountability screen: does the promoter carry at least `min_share` of the
// capital as genuine risk capital? Reported as a flag, never used to rank.
bool meets_private_capital_rule(const PromoterProject& p, double min_share = 1.0 / 3.0);

enum class SelectionRule { naive_stated_bcr, rcf_adjusted_bcr, true_bcr };

// Reference-class correction for one project type: inflate the stated cost by
// the class uplift, deflate the stated benefit by the class mean overestimate.
struct TypeCorrection {
  double uplift_pct = 0.0;
  double benefit_overestimate_pct = 0.0;
};

struct SelectionPolicy {
  SelectionRule rule = SelectionRule::naive_stated_bcr;
  std::size_t budget_slots = 0;  // k projects funded; > 0
  // Required for rcf_adjusted_bcr: correction per project type (a project's own
  // reference class). Missing types get no correction.
  std::map<ProjectType, TypeCorrection> corrections;
};

// Appraisal value the policy ranks by.
double policy_appraisal(const PromoterProject& p, const SelectionPolicy& policy);

struct SelectionResult {
  std::vector<std::string> funded;  // ids in funding order (best first)
  double mean_realized_bcr_funded = 0.0;
  double mean_realized_bcr_unfunded = 0.0;  // NaN when nothing is unfunded
  // Shortfall vs the clairvoyant true-ranking policy on the same pool; >= 0.
  double regret = 0.0;
};

// Funds the top min(k, pool) projects by policy appraisal; ties break toward
// the smaller id. Realized performance always uses true figures.
SelectionResult select(std::span<const PromoterProject> pool, const SelectionPolicy& policy);

// ---- repeated-competition experiment ---------------------------------------

struct TypeBias {
  double share = 0.0;               // fraction of the pool, normalized over types
  double understatement_mean = 0.0;
  double understatement_sd = 0.0;
  double benefit_bias_mean = 0.0;
  double benefit_bias_sd = 0.0;
};

struct ExperimentConfig {
  // Pool/slot defaults sized so the per-trial policy ordering is stable:
  // with 16 funded of 64, naive funding realizes a lower mean BCR than the
  // rcf-adjusted policy in > 95% of trials under the default calibration.
  std::size_t pool_size = 64;
  std::size_t budget_slots = 16;
  std::size_t trials = 1000;
  double acceptable_risk = 0.5;   // risk level of the rcf uplift correction
  double true_bcr_mean = 1.1;     // true quality, independent of bias
  double true_bcr_sd = 0.3;
  double cost_median = 500.0;     // lognormal true cost
  double cost_log_sd = 0.8;
  std::size_t calibration_draws = 2000;  // synthetic history behind rcf corrections
  std::map<ProjectType, TypeBias> types;

  // Two-type pool with bias means tied to the published aggregates:
  // rail median overrun 44.7 / benefit overestimate 105.6; road median
  // overrun 20.4 / benefit overestimate -8.68 (traffic ran 9.5 above forecast).
  static ExperimentConfig defaults();
  // Same shape, all biases zero: control where every policy should coincide.
  static ExperimentConfig zero_bias();
};

struct PolicySummary {
  SelectionRule rule = SelectionRule::naive_stated_bcr;
  std::size_t trials = 0;
  double mean_funded_bcr = 0.0;
  Interval funded_ci;             // percentile bootstrap over trials
  double mean_unfunded_bcr = 0.0;
  double mean_regret = 0.0;
  std::vector<double> per_trial_funded;
};

struct ExperimentResult {
  std::uint64_t seed = 0;
  std::vector<PolicySummary> policies;
  // Fraction of trials where naive funding realized a lower mean BCR than
  // rcf_adjusted (only set when both policies ran).
  double fraction_naive_below_rcf = 0.0;
  std::map<ProjectType, TypeCorrection> derived_corrections;
};

// Runs `trials` independent funding competitions. Pool generation for trial t
// uses streams keyed on (seed, t); the same seed reproduces bit-identical
// results for any thread schedule. Policies are evaluated on identical pools.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::span<const SelectionRule> policies,
                                std::uint64_t seed, double ci_level = 0.99);

std::string_view to_string(SelectionRule r);
std::optional<SelectionRule> selection_rule_from_string(std::string_view s);

}  // namespace rcf
