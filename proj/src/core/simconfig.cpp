#include "core/simconfig.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/report.hpp"

namespace rcf {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double to_double(const std::string& v, std::size_t line) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ParseError("config line " + std::to_string(line) + ": not a number: '" + v + "'");
  return out;
}

std::size_t to_size(const std::string& v, std::size_t line) {
  unsigned long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ParseError("config line " + std::to_string(line) + ": not a count: '" + v + "'");
  return static_cast<std::size_t>(out);
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg = ExperimentConfig::defaults();
  bool types_cleared = false;
  TypeBias* block = nullptr;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto colon = text.find(':');
    if (colon == std::string::npos)
      throw ParseError("config line " + std::to_string(line) + ": expected 'key: value'");
    const std::string key = trim(text.substr(0, colon));
    const std::string value = trim(text.substr(colon + 1));

    if (key == "type") {
      const auto t = project_type_from_string(value);
      if (!t)
        throw ParseError("config line " + std::to_string(line) + ": unknown project type '" +
                         value + "'");
      if (!types_cleared) {
        cfg.types.clear();
        types_cleared = true;
      }
      block = &cfg.types[*t];
      block->share = 1.0;  // default until overridden
      continue;
    }

    if (block) {
      if (key == "share") { block->share = to_double(value, line); continue; }
      if (key == "understatement_mean") { block->understatement_mean = to_double(value, line); continue; }
      if (key == "understatement_sd") { block->understatement_sd = to_double(value, line); continue; }
      if (key == "benefit_bias_mean") { block->benefit_bias_mean = to_double(value, line); continue; }
      if (key == "benefit_bias_sd") { block->benefit_bias_sd = to_double(value, line); continue; }
    }
    if (key == "pool_size") cfg.pool_size = to_size(value, line);
    else if (key == "budget_slots") cfg.budget_slots = to_size(value, line);
    else if (key == "trials") cfg.trials = to_size(value, line);
    else if (key == "acceptable_risk") cfg.acceptable_risk = to_double(value, line);
    else if (key == "true_bcr_mean") cfg.true_bcr_mean = to_double(value, line);
    else if (key == "true_bcr_sd") cfg.true_bcr_sd = to_double(value, line);
    else if (key == "cost_median") cfg.cost_median = to_double(value, line);
    else if (key == "cost_log_sd") cfg.cost_log_sd = to_double(value, line);
    else if (key == "calibration_draws") cfg.calibration_draws = to_size(value, line);
    else
      throw ParseError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config: " + path);
  return parse_experiment_config(in);
}

std::string experiment_config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "pool_size: " << cfg.pool_size << '\n'
      << "budget_slots: " << cfg.budget_slots << '\n'
      << "trials: " << cfg.trials << '\n'
      << "acceptable_risk: " << format_double(cfg.acceptable_risk) << '\n'
      << "true_bcr_mean: " << format_double(cfg.true_bcr_mean) << '\n'
      << "true_bcr_sd: " << format_double(cfg.true_bcr_sd) << '\n'
      << "cost_median: " << format_double(cfg.cost_median) << '\n'
      << "cost_log_sd: " << format_double(cfg.cost_log_sd) << '\n'
      << "calibration_draws: " << cfg.calibration_draws << '\n';
  for (const auto& [type, bias] : cfg.types) {
    out << "type: " << to_string(type) << '\n'
        << "share: " << format_double(bias.share) << '\n'
        << "understatement_mean: " << format_double(bias.understatement_mean) << '\n'
        << "understatement_sd: " << format_double(bias.understatement_sd) << '\n'
        << "benefit_bias_mean: " << format_double(bias.benefit_bias_mean) << '\n'
        << "benefit_bias_sd: " << format_double(bias.benefit_bias_sd) << '\n';
  }
  return out.str();
}

}  // namespace rcf
