#pragma once

#include <iosfwd>
#include <string>

#include "core/selection.hpp"

namespace rcf {

// Experiment config as "key: value" lines. Recognized top-level keys:
//   pool_size, budget_slots, trials, acceptable_risk, true_bcr_mean,
//   true_bcr_sd, cost_median, cost_log_sd, calibration_draws
// A "type: <rail|road|bridge_tunnel|ict|other>" line opens a block; inside it
//   share, understatement_mean, understatement_sd, benefit_bias_mean,
//   benefit_bias_sd
// apply to that type. '#' starts a comment. Keys not listed keep defaults;
// the first "type:" line clears the default type table.
ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

std::string experiment_config_text(const ExperimentConfig& cfg);

}  // namespace rcf
