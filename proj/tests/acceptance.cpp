// Acceptance harness: one line per criterion, nonzero exit if any fail.
// Each check pins its tolerance in place, next to the number it guards.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "core/empirical.hpp"
#include "core/errors.hpp"
#include "core/forecast.hpp"
#include "core/records.hpp"
#include "core/refclass.hpp"
#include "core/selection.hpp"
#include "core/stats.hpp"
#include "core/viability.hpp"

namespace {

const std::string kCli = RCF_CLI_PATH;
const std::string kData = RCF_DATA_DIR;

struct CheckFailure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw CheckFailure{detail};
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// ---- CLI capture -----------------------------------------------------------

std::string run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "popen failed for: " + cmd);
  std::string out;
  char buf[4096];
  size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "CLI exited nonzero: " + cmd);
  return out;
}

struct SummaryRow {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
};

SummaryRow csv_row(const std::string& csv, const std::string& group) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(group + ",", 0) != 0) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> fields;
    while (std::getline(cells, cell, ',')) fields.push_back(cell);
    require(fields.size() >= 4, "short summary row for " + group);
    SummaryRow row;
    row.n = std::stoul(fields[1]);
    row.mean = std::stod(fields[2]);
    row.sd = std::stod(fields[3]);
    return row;
  }
  throw CheckFailure{"no summary row for group '" + group + "'"};
}

// ---- independent quantile oracle: walks adjacent order-statistic positions
// k/(n-1) instead of computing the h = (n-1)q index directly.
double quantile_oracle(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (q <= 0.0) return v.front();
  if (q >= 1.0) return v.back();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double pk = static_cast<double>(k) / static_cast<double>(n - 1);
    const double pk1 = static_cast<double>(k + 1) / static_cast<double>(n - 1);
    if (q >= pk && q <= pk1) {
      const double w = (q - pk) / (pk1 - pk);
      return v[k] + w * (v[k + 1] - v[k]);
    }
  }
  return v.back();
}

rcf::EmpiricalDistribution load_class(const char* file) {
  return rcf::load_class_csv(kData + "/" + file, rcf::InaccuracyKind::cost_overrun, 2)
      .distribution;
}

// Appraisal whose forecast BCR equals `target` exactly up to rounding: the
// benefit is backed out through the same 30-year, 3.5 percent annuity.
rcf::AppraisalInput appraisal_with_bcr(double target) {
  double annuity = 0.0;
  for (int t = 1; t <= 30; ++t) annuity += std::pow(1.035, -t);
  rcf::AppraisalInput a{1000.0, target * 1000.0 / annuity, 30, 0.035};
  require(std::abs(rcf::forecast_bcr(a) - target) < 1e-9, "backed-out BCR drifted");
  return a;
}

// ---- criteria --------------------------------------------------------------

std::string criterion_1() {
  const double t0 = now_seconds();
  const auto costs =
      run_cli("stats " + kData + "/transport_costs.csv --kind cost --by type --format csv");
  const auto traffic = run_cli("stats " + kData +
                               "/transport_traffic.csv --kind traffic --by type --format csv");
  const double elapsed = now_seconds() - t0;

  struct Expect {
    const std::string* csv;
    const char* group;
    std::size_t n;
    double mean, sd;
  };
  const Expect expect[] = {
      {&costs, "rail", 58, 44.7, 38.4},
      {&costs, "bridge_tunnel", 33, 33.8, 62.4},
      {&costs, "road", 167, 20.4, 29.9},
      {&traffic, "rail", 25, -51.4, 28.1},
      {&traffic, "road", 183, 9.5, 44.3},
  };
  for (const auto& e : expect) {
    const auto row = csv_row(*e.csv, e.group);
    require(row.n == e.n, std::string(e.group) + ": n " + std::to_string(row.n));
    require(std::abs(row.mean - e.mean) < 0.05, std::string(e.group) + ": mean off");
    require(std::abs(row.sd - e.sd) < 0.05, std::string(e.group) + ": sd off");
  }
  require(elapsed < 1.0, "stats runs took too long");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "five aggregate rows, %.2f s", elapsed);
  return buf;
}

std::string criterion_2() {
  const double flipped = rcf::overestimate_from_shortfall(-51.4);
  require(flipped >= 105.1 && flipped <= 106.1, "flip of -51.4 outside [105.1, 106.1]");
  std::mt19937_64 gen(8675309);
  std::uniform_real_distribution<double> d(-99.9, 400.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = d(gen);
    const double back = rcf::overestimate_from_shortfall(rcf::overestimate_from_shortfall(x));
    require(std::abs(back - x) <= 1e-9 * std::max(1.0, std::abs(x)),
            "involution broke at x = " + std::to_string(x));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "flip(-51.4) = %.2f, involution on 10000 draws", flipped);
  return buf;
}

std::string criterion_3() {
  const auto rail = load_class("uk_rail_class.csv");
  require(rcf::required_uplift(rail, 0.5) == 40.0, "uplift at risk 0.5 not exactly 40");
  require(rcf::required_uplift(rail, 0.1) == 68.0, "uplift at risk 0.1 not exactly 68");
  const auto median = rcf::reference_class_forecast(4000.0, rail, 0.5, 0.8, "uk-rail");
  const auto strict = rcf::reference_class_forecast(4000.0, rail, 0.1, 0.8, "uk-rail");
  require(std::abs((median.adjusted_estimate - 4000.0) - 1600.0) <= 50.0,
          "absolute uplift at risk 0.5 off");
  require(std::abs((strict.adjusted_estimate - 4000.0) - 2720.0) <= 50.0,
          "absolute uplift at risk 0.1 off");
  return "rail uplifts 40/68 pct, 1600/2720 on a 4000 base";
}

std::string criterion_4() {
  const auto tram = load_class("tram_class.csv");
  const auto conservative = rcf::reference_class_forecast(320.0, tram, 0.2, 0.8, "tram");
  const auto central = rcf::reference_class_forecast(320.0, tram, 0.5, 0.8, "tram");
  require(std::abs(conservative.adjusted_estimate - 400.0) <= 1.0,
          "tram risk-0.2 forecast off 400");
  require(std::abs(central.adjusted_estimate - 357.0) <= 1.0, "tram risk-0.5 forecast off 357");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "tram 320 -> %.0f / %.0f", conservative.adjusted_estimate,
                central.adjusted_estimate);
  return buf;
}

std::string criterion_5() {
  std::mt19937_64 gen(424242);
  std::uniform_int_distribution<int> size_d(2, 8);
  std::uniform_real_distribution<double> val_d(-200.0, 500.0);
  std::uniform_real_distribution<double> q_d(0.0, 1.0);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> v(size_d(gen));
    for (auto& x : v) x = val_d(gen);
    const rcf::EmpiricalDistribution dist(v);
    for (int j = 0; j < 50; ++j) {
      const double q = q_d(gen);
      const double want = quantile_oracle(v, q);
      const double got = dist.quantile(q);
      require(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)),
              "quantile mismatch at q = " + std::to_string(q));
    }
  }
  return "500 small samples x 50 quantiles vs position-walk oracle";
}

std::string criterion_6() {
  std::mt19937_64 gen(997);
  std::uniform_int_distribution<int> size_d(2, 60);
  std::uniform_real_distribution<double> val_d(-80.0, 300.0);
  std::uniform_real_distribution<double> risk_d(0.02, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> v(size_d(gen));
    for (auto& x : v) x = val_d(gen);
    const rcf::EmpiricalDistribution dist(v);
    std::vector<double> risks = {1.0};
    for (int j = 0; j < 24; ++j) risks.push_back(risk_d(gen));
    std::sort(risks.begin(), risks.end(), std::greater<>());
    double prev = -1e300;
    for (const double r : risks) {
      const double u = rcf::required_uplift(dist, r);
      require(u >= prev, "uplift not non-increasing in risk");
      prev = u;
      std::size_t over = 0;
      for (const double x : v)
        if (x > u) ++over;
      require(static_cast<double>(over) <= r * static_cast<double>(v.size()),
              "exceedance above the acceptable risk");
    }
  }
  return "monotone uplift and exceedance <= risk on 200 random classes";
}

std::string criterion_7() {
  // Realized scale: 80 percent cost overrun, benefits at half the forecast.
  const rcf::AppraisalInput example{4000.0, 450.0, 30, 0.035};
  const auto realized = rcf::ex_post_evaluate(example, 80.0, 0.5);
  const double ratio = realized.bcr_mean / realized.forecast_bcr;
  require(std::abs(ratio - 0.27778) <= 1e-5 + 1e-9, "realized/forecast ratio off 0.27778");

  // Non-viability holds right up to the break-even forecast BCR of 3.6 and
  // vanishes just above it (at exactly 3.6 the realized BCR is exactly 1).
  for (const double target : {1.0, 2.0, 3.0, 3.5, 3.59, 3.5999}) {
    const auto rep = rcf::ex_post_evaluate(appraisal_with_bcr(target), 80.0, 0.5);
    require(rep.p_nonviable == 1.0,
            "p_nonviable not 1 at forecast BCR " + std::to_string(target));
  }
  const auto above = rcf::ex_post_evaluate(appraisal_with_bcr(3.6036), 80.0, 0.5);
  require(above.p_nonviable == 0.0, "p_nonviable not 0 just above 3.6");

  // Determinism: same seed, any thread count, bit-identical reports.
  rcf::RealizationModel model;
  model.cost_overrun_pct = load_class("uk_rail_class.csv");
  model.benefit_source = 0.85;
  const auto a1 = rcf::monte_carlo_viability(example, model, 2000, 99, 1);
  const auto a4 = rcf::monte_carlo_viability(example, model, 2000, 99, 4);
  const auto again = rcf::monte_carlo_viability(example, model, 2000, 99, 1);
  require(a1.bcr_mean == a4.bcr_mean && a1.npv_mean == a4.npv_mean &&
              a1.p_nonviable == a4.p_nonviable && a1.bcr_quantiles == a4.bcr_quantiles,
          "thread count changed Monte Carlo output");
  require(a1.bcr_mean == again.bcr_mean && a1.npv_quantiles == again.npv_quantiles,
          "repeated run changed Monte Carlo output");
  char buf[80];
  std::snprintf(buf, sizeof(buf), "ratio %.5f, break-even grid, bit-identical MC", ratio);
  return buf;
}

std::string criterion_8() {
  const double t0 = now_seconds();
  const std::vector<rcf::SelectionRule> policies = {rcf::SelectionRule::naive_stated_bcr,
                                                    rcf::SelectionRule::rcf_adjusted_bcr,
                                                    rcf::SelectionRule::true_bcr};
  const auto cfg = rcf::ExperimentConfig::defaults();
  const auto res = rcf::run_experiment(cfg, policies, 42424242);
  const auto& naive = res.policies[0];
  const auto& adjusted = res.policies[1];
  const auto& truth = res.policies[2];
  require(truth.mean_funded_bcr >= adjusted.mean_funded_bcr,
          "clairvoyant mean below the adjusted policy");
  require(adjusted.mean_funded_bcr > naive.mean_funded_bcr,
          "adjusted mean not above naive");
  require(res.fraction_naive_below_rcf >= 0.95,
          "naive beats adjusted in more than 5 pct of trials");

  // Significance at the 1 percent level: bootstrap CI of the mean per-trial
  // gap (adjusted - naive) must sit strictly above zero.
  std::vector<double> gaps(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t)
    gaps[t] = adjusted.per_trial_funded[t] - naive.per_trial_funded[t];
  const rcf::EmpiricalDistribution gap_dist(gaps);
  const auto ci =
      rcf::bootstrap_ci(gap_dist, rcf::BootstrapStatistic::mean, 0.5, 0.99, 2000, 1234);
  require(ci.lo > 0.0, "99 pct CI of the funding gap includes zero");

  // Control: with all biases off the gap vanishes identically.
  const auto zero = rcf::run_experiment(rcf::ExperimentConfig::zero_bias(), policies, 42424242);
  for (std::size_t t = 0; t < cfg.trials; ++t)
    require(zero.policies[1].per_trial_funded[t] == zero.policies[0].per_trial_funded[t],
            "zero-bias control shows a policy gap");
  require(zero.fraction_naive_below_rcf == 0.0, "zero-bias control fraction not 0");

  const double elapsed = now_seconds() - t0;
  require(elapsed < 30.0, "experiment exceeded 30 s");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "fraction %.3f, gap CI lo %.4f, control exact, %.1f s",
                res.fraction_naive_below_rcf, ci.lo, elapsed);
  return buf;
}

std::string criterion_9() {
  // Null calibration of the trend test: stationary inaccuracies must not
  // manufacture a time trend. Nominal size 5 pct; allow sampling slack to 7.
  std::mt19937_64 gen(20260823);
  std::normal_distribution<double> noise(40.0, 30.0);
  std::uniform_int_distribution<int> year_d(1940, 2010);
  int rejects = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    std::vector<rcf::YearValue> pts(50);
    for (auto& p : pts) p = {year_d(gen), noise(gen)};
    if (rcf::test_time_trend(pts).reject_at_5pct) ++rejects;
  }
  const double rate = static_cast<double>(rejects) / reps;
  require(rate <= 0.07, "null rejection rate above 7 pct: " + std::to_string(rate));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "null rejection rate %.3f over %d replications", rate, reps);
  return buf;
}

struct Criterion {
  int number;
  const char* label;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "published aggregates reproduced through the CLI", criterion_1},
      {2, "shortfall/overestimate flip and its involution", criterion_2},
      {3, "rail uplift anchors and monetized uplifts", criterion_3},
      {4, "tram forecast anchors", criterion_4},
      {5, "quantile engine vs independent oracle", criterion_5},
      {6, "uplift monotonicity and exceedance guarantee", criterion_6},
      {7, "viability break-even and Monte Carlo determinism", criterion_7},
      {8, "selection experiment separates the policies", criterion_8},
      {9, "time-trend test holds its size under the null", criterion_9},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const CheckFailure& f) {
      ok = false;
      detail = f.detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", c.number, c.label,
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
