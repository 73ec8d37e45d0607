// rcf — command-line interface to the reference class forecasting toolkit.
// Exit codes: 0 success, 1 usage error, 2 data/domain error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcf/rcf.h"

namespace {

// Inputs may be given relative to a fixture directory; used by tests and demos.
std::string resolve_input(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::exists(path)) return path;
  if (const char* dir = std::getenv("RCF_FIXTURE_DIR")) {
    const fs::path alt = fs::path(dir) / path;
    if (fs::exists(alt)) return alt.string();
  }
  return path;  // let the library report the open failure
}

[[noreturn]] void die(rcf_status status) {
  const char* msg = rcf_last_error();
  std::fprintf(stderr, "error: %s\n", msg[0] ? msg : rcf_strerror(status));
  std::exit(2);
}

void check(rcf_status status) {
  if (status != RCF_OK) die(status);
}

void print_report(rcf_report* report) {
  std::fputs(rcf_report_text(report), stdout);
  rcf_report_free(report);
}

const std::map<std::string, int> kTypeNames = {
    {"rail", RCF_TYPE_RAIL},
    {"road", RCF_TYPE_ROAD},
    {"bridge_tunnel", RCF_TYPE_BRIDGE_TUNNEL},
    {"ict", RCF_TYPE_ICT},
    {"other", RCF_TYPE_OTHER},
};
const std::map<std::string, int> kRegionNames = {
    {"europe", RCF_REGION_EUROPE},
    {"north_america", RCF_REGION_NORTH_AMERICA},
    {"emerging", RCF_REGION_EMERGING},
    {"other", RCF_REGION_OTHER},
};

struct FilterOpts {
  std::vector<std::string> types;
  std::vector<std::string> regions;
  int year_min = INT32_MIN;
  int year_max = INT32_MAX;
  int min_size = 0;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--types", types, "Project types to include (repeatable)")
        ->check(CLI::IsMember(kTypeNames))
        ->delimiter(',');
    cmd->add_option("--regions", regions, "Regions to include (repeatable)")
        ->check(CLI::IsMember(kRegionNames))
        ->delimiter(',');
    cmd->add_option("--year-min", year_min, "Earliest decision year (inclusive)");
    cmd->add_option("--year-max", year_max, "Latest decision year (inclusive)");
  }

  rcf_filter build() const {
    rcf_filter f;
    rcf_filter_init(&f);
    for (const auto& t : types) f.type_mask |= 1u << kTypeNames.at(t);
    for (const auto& r : regions) f.region_mask |= 1u << kRegionNames.at(r);
    f.year_min = year_min;
    f.year_max = year_max;
    f.min_size = min_size;
    return f;
  }
};

rcf_format parse_format(const std::string& name) {
  return name == "csv" ? RCF_FORMAT_CSV : RCF_FORMAT_TEXT;
}

void add_format_option(CLI::App* cmd, std::string* fmt) {
  cmd->add_option("--format", *fmt, "Output format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
}

rcf_dataset* load_dataset_or_die(const std::string& path) {
  rcf_dataset* ds = nullptr;
  check(rcf_dataset_load(resolve_input(path).c_str(), &ds));
  return ds;
}

void warn_small_class(const rcf_class* cls) {
  size_t n = 0;
  rcf_class_size(cls, &n);
  if (n < 30)
    std::fprintf(stderr,
                 "warning: reference class has %zu observations; classes below 30 "
                 "give indicative results only\n",
                 n);
}

rcf_class* load_class_or_die(const std::string& path, rcf_kind kind) {
  rcf_class* cls = nullptr;
  check(rcf_class_load(resolve_input(path).c_str(), kind, 2, &cls));
  warn_small_class(cls);
  return cls;
}

void print_test(const rcf_test_result& t, bool with_slope, bool with_means) {
  std::printf("test: %s\n", t.test_name);
  std::printf("statistic: %.10g\n", t.statistic);
  std::printf("p_value: %.10g\n", t.p_value);
  std::printf("reject_at_5pct: %d\n", t.reject_at_5pct);
  std::printf("df: %.10g\n", t.df);
  if (with_slope) std::printf("slope: %.10g\n", t.slope);
  if (with_means) {
    std::printf("mean_a: %.10g\n", t.mean_a);
    std::printf("mean_b: %.10g\n", t.mean_b);
  }
}

constexpr uint64_t kDefaultSeed = 42424242;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference class forecasting toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rcf_version());

  // ---- ingest -------------------------------------------------------------
  auto* ingest = app.add_subcommand("ingest", "Validate a dataset and report its composition");
  std::string ingest_path;
  std::string ingest_format = "text";
  ingest->add_option("dataset", ingest_path, "Dataset CSV path")->required();
  add_format_option(ingest, &ingest_format);
  ingest->callback([&] {
    rcf_dataset* ds = load_dataset_or_die(ingest_path);
    rcf_report* rep = nullptr;
    check(rcf_ingest_report(ds, ingest_path.c_str(), parse_format(ingest_format), &rep));
    print_report(rep);
    rcf_dataset_free(ds);
  });

  // ---- stats --------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "Descriptive statistics of forecast inaccuracy");
  std::string stats_path, stats_kind = "cost", stats_by = "type", stats_format = "text";
  double stats_band = 20.0;
  bool stats_outliers = false, stats_test_mean = false, stats_test_trend = false;
  std::string stats_test_diff;
  FilterOpts stats_filter;
  stats->add_option("dataset", stats_path, "Dataset CSV path")->required();
  stats->add_option("--kind", stats_kind, "Inaccuracy kind: cost or traffic")
      ->check(CLI::IsMember({"cost", "traffic"}))
      ->capture_default_str();
  stats->add_option("--by", stats_by, "Grouping: none, type, region, type-region")
      ->check(CLI::IsMember({"none", "type", "region", "type-region"}))
      ->capture_default_str();
  stats->add_option("--band", stats_band, "Half-width of the |inaccuracy| <= band accuracy band")
      ->capture_default_str();
  stats->add_flag("--exclude-outliers", stats_outliers,
                  "Screen out robust-z > 3 observations (excluded ids are listed)");
  stats_filter.add_options(stats);
  stats->add_flag("--test-mean-zero", stats_test_mean,
                  "One-sample t-test that the mean inaccuracy is zero");
  stats->add_flag("--test-trend", stats_test_trend,
                  "OLS t-test of a linear time trend in inaccuracy");
  stats->add_option("--test-diff", stats_test_diff,
                    "Welch t-test between two groups, e.g. rail:road or europe:emerging");
  add_format_option(stats, &stats_format);
  stats->callback([&] {
    rcf_dataset* ds = load_dataset_or_die(stats_path);
    const rcf_filter filter = stats_filter.build();
    rcf_stats_options opt;
    rcf_stats_options_init(&opt);
    opt.kind = stats_kind == "traffic" ? RCF_KIND_TRAFFIC : RCF_KIND_COST;
    opt.group_by = stats_by == "none"     ? RCF_GROUP_NONE
                   : stats_by == "region" ? RCF_GROUP_REGION
                   : stats_by == "type-region" ? RCF_GROUP_TYPE_REGION
                                               : RCF_GROUP_TYPE;
    opt.band_halfwidth = stats_band;
    opt.exclude_outliers = stats_outliers ? 1 : 0;
    opt.format = parse_format(stats_format);

    rcf_report* rep = nullptr;
    check(rcf_stats_report(ds, &filter, &opt, &rep));
    print_report(rep);

    rcf_test_result t;
    if (stats_test_mean) {
      check(rcf_test_mean_nonzero(ds, &filter, opt.kind, &t));
      print_test(t, false, false);
      std::printf("mean: %.10g\n", t.mean_a);
    }
    if (stats_test_trend) {
      check(rcf_test_time_trend(ds, &filter, opt.kind, &t));
      print_test(t, true, false);
    }
    if (!stats_test_diff.empty()) {
      const auto colon = stats_test_diff.find(':');
      if (colon == std::string::npos) {
        std::fprintf(stderr, "error: --test-diff expects GROUP:GROUP\n");
        std::exit(1);
      }
      const std::string a = stats_test_diff.substr(0, colon);
      const std::string b = stats_test_diff.substr(colon + 1);
      rcf_filter fa = filter, fb = filter;
      if (kTypeNames.count(a) && kTypeNames.count(b)) {
        fa.type_mask = 1u << kTypeNames.at(a);
        fb.type_mask = 1u << kTypeNames.at(b);
      } else if (kRegionNames.count(a) && kRegionNames.count(b)) {
        fa.region_mask = 1u << kRegionNames.at(a);
        fb.region_mask = 1u << kRegionNames.at(b);
      } else {
        std::fprintf(stderr, "error: --test-diff groups must both be project types "
                             "or both regions\n");
        std::exit(1);
      }
      check(rcf_test_group_difference(ds, &fa, &fb, opt.kind, &t));
      print_test(t, false, true);
    }
    rcf_dataset_free(ds);
  });

  // ---- class --------------------------------------------------------------
  auto* cls_cmd = app.add_subcommand("class", "Build a reference class from a dataset");
  std::string cls_path, cls_kind = "cost", cls_format = "text";
  std::string cls_out, cls_dist_out, cls_hist_out;
  std::size_t cls_hist_bins = 10;
  FilterOpts cls_filter;
  cls_cmd->add_option("dataset", cls_path, "Dataset CSV path")->required();
  cls_cmd->add_option("--kind", cls_kind, "Inaccuracy kind: cost or traffic")
      ->check(CLI::IsMember({"cost", "traffic"}))
      ->capture_default_str();
  cls_filter.add_options(cls_cmd);
  cls_cmd->add_option("--min-size", cls_filter.min_size,
                      "Minimum class size (default 10)");
  cls_cmd->add_option("--out", cls_out, "Write the class observations to this CSV");
  cls_cmd->add_option("--dist-out", cls_dist_out, "Write the quantile curve to this CSV");
  cls_cmd->add_option("--hist-out", cls_hist_out, "Write a histogram to this CSV");
  cls_cmd->add_option("--hist-bins", cls_hist_bins, "Histogram bin count")
      ->capture_default_str();
  add_format_option(cls_cmd, &cls_format);
  cls_cmd->callback([&] {
    rcf_dataset* ds = load_dataset_or_die(cls_path);
    const rcf_filter filter = cls_filter.build();
    const rcf_kind kind = cls_kind == "traffic" ? RCF_KIND_TRAFFIC : RCF_KIND_COST;
    rcf_class* cls = nullptr;
    check(rcf_class_build(ds, &filter, kind, cls_path.c_str(), &cls));
    warn_small_class(cls);

    rcf_report* rep = nullptr;
    check(rcf_class_report(cls, parse_format(cls_format), &rep));
    print_report(rep);

    if (!cls_out.empty()) check(rcf_class_save(cls, cls_out.c_str()));
    if (!cls_dist_out.empty()) {
      rcf_report* curve = nullptr;
      check(rcf_class_quantile_curve(cls, &curve));
      std::FILE* f = std::fopen(cls_dist_out.c_str(), "w");
      if (!f) { std::fprintf(stderr, "error: cannot write %s\n", cls_dist_out.c_str()); std::exit(2); }
      std::fputs(rcf_report_text(curve), f);
      std::fclose(f);
      rcf_report_free(curve);
    }
    if (!cls_hist_out.empty()) {
      rcf_report* hist = nullptr;
      check(rcf_class_histogram(cls, cls_hist_bins, &hist));
      std::FILE* f = std::fopen(cls_hist_out.c_str(), "w");
      if (!f) { std::fprintf(stderr, "error: cannot write %s\n", cls_hist_out.c_str()); std::exit(2); }
      std::fputs(rcf_report_text(hist), f);
      std::fclose(f);
      rcf_report_free(hist);
    }
    rcf_class_free(cls);
    rcf_dataset_free(ds);
  });

  // ---- uplift -------------------------------------------------------------
  auto* uplift = app.add_subcommand("uplift", "Required uplift at given acceptable risk levels");
  std::string up_class, up_kind = "cost", up_format = "text";
  std::vector<double> up_risks;
  bool up_grid = false;
  uplift->add_option("--class", up_class, "Reference class CSV (project_id,value)")
      ->required();
  uplift->add_option("--kind", up_kind, "Inaccuracy kind: cost or traffic")
      ->check(CLI::IsMember({"cost", "traffic"}))
      ->capture_default_str();
  uplift->add_option("--risk", up_risks, "Acceptable risk of overrun, in (0, 1] (repeatable)")
      ->delimiter(',');
  uplift->add_flag("--grid", up_grid, "Evaluate the standard risk grid");
  add_format_option(uplift, &up_format);
  uplift->callback([&] {
    const rcf_kind kind = up_kind == "traffic" ? RCF_KIND_TRAFFIC : RCF_KIND_COST;
    rcf_class* cls = load_class_or_die(up_class, kind);
    std::vector<double> risks = up_risks;
    if (up_grid || risks.empty())
      risks = {0.95, 0.9, 0.75, 0.5, 0.25, 0.1, 0.05};

    if (parse_format(up_format) == RCF_FORMAT_CSV) {
      rcf_report* rep = nullptr;
      check(rcf_uplift_schedule(cls, risks.data(), risks.size(), &rep));
      print_report(rep);
    } else {
      size_t n = 0;
      rcf_class_size(cls, &n);
      std::printf("report: uplift\n");
      std::printf("class: %s\n", up_class.c_str());
      std::printf("n: %zu\n", n);
      for (const double r : risks) {
        double u = 0.0;
        check(rcf_required_uplift(cls, r, &u));
        std::printf("risk: %.10g\n", r);
        std::printf("uplift_pct: %.10g\n", u);
      }
    }
    rcf_class_free(cls);
  });

  // ---- forecast -----------------------------------------------------------
  auto* forecast = app.add_subcommand("forecast", "Reference-class-adjusted cost forecast");
  std::string fc_class, fc_kind = "cost", fc_format = "text";
  double fc_base = 0.0, fc_risk = 0.5, fc_coverage = 0.8;
  forecast->add_option("--class", fc_class, "Reference class CSV (project_id,value)")
      ->required();
  forecast->add_option("--kind", fc_kind, "Inaccuracy kind: cost or traffic")
      ->check(CLI::IsMember({"cost", "traffic"}))
      ->capture_default_str();
  forecast->add_option("--base", fc_base, "Promoter's base estimate (money units)")
      ->required();
  forecast->add_option("--risk", fc_risk, "Acceptable risk of overrun, in (0, 1]")
      ->capture_default_str();
  forecast->add_option("--coverage", fc_coverage, "Central interval coverage, in (0, 1)")
      ->capture_default_str();
  add_format_option(forecast, &fc_format);
  forecast->callback([&] {
    const rcf_kind kind = fc_kind == "traffic" ? RCF_KIND_TRAFFIC : RCF_KIND_COST;
    rcf_class* cls = load_class_or_die(fc_class, kind);
    rcf_report* rep = nullptr;
    check(rcf_forecast_report(cls, fc_class.c_str(), fc_base, fc_risk, fc_coverage,
                              parse_format(fc_format), &rep));
    print_report(rep);
    rcf_class_free(cls);
  });

  // ---- duediligence -------------------------------------------------------
  auto* dd = app.add_subcommand("duediligence",
                                "Outside-view viability check of an appraisal");
  std::string dd_appraisal, dd_cost_class, dd_benefit_class, dd_paired, dd_format = "text";
  double dd_const_overrun = 0.0, dd_const_factor = 1.0;
  std::size_t dd_samples = 10000;
  uint64_t dd_seed = kDefaultSeed;
  int dd_threads = 0;
  dd->add_option("--appraisal", dd_appraisal,
                 "Appraisal CSV: forecast_cost,forecast_annual_benefit,horizon_years,"
                 "discount_rate")
      ->required();
  dd->add_option("--cost-class", dd_cost_class, "Cost overrun reference class CSV");
  dd->add_option("--benefit-class", dd_benefit_class,
                 "Traffic/benefit inaccuracy reference class CSV");
  dd->add_option("--paired", dd_paired,
                 "Dataset CSV; resample observed (overrun, traffic) pairs");
  dd->add_option("--const-overrun", dd_const_overrun,
                 "Constant cost overrun percent (when no cost class)")
      ->capture_default_str();
  dd->add_option("--const-factor", dd_const_factor,
                 "Constant benefit multiplier (when no benefit class)")
      ->capture_default_str();
  dd->add_option("--samples", dd_samples, "Monte Carlo sample count")
      ->capture_default_str();
  dd->add_option("--seed", dd_seed, "Random seed")->capture_default_str();
  dd->add_option("--threads", dd_threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  add_format_option(dd, &dd_format);
  dd->callback([&] {
    rcf_appraisal a;
    check(rcf_appraisal_load(resolve_input(dd_appraisal).c_str(), &a));
    rcf_class* cost_cls = nullptr;
    rcf_class* benefit_cls = nullptr;
    rcf_dataset* paired = nullptr;
    if (!dd_cost_class.empty()) cost_cls = load_class_or_die(dd_cost_class, RCF_KIND_COST);
    if (!dd_benefit_class.empty())
      benefit_cls = load_class_or_die(dd_benefit_class, RCF_KIND_TRAFFIC);
    if (!dd_paired.empty()) paired = load_dataset_or_die(dd_paired);

    rcf_report* rep = nullptr;
    check(rcf_due_diligence_report(&a, cost_cls, dd_const_overrun, benefit_cls,
                                   dd_const_factor, paired, dd_samples, dd_seed, dd_threads,
                                   parse_format(dd_format), &rep));
    print_report(rep);
    rcf_dataset_free(paired);
    rcf_class_free(benefit_cls);
    rcf_class_free(cost_cls);
  });

  // ---- simulate -----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate",
                                 "Repeated funding competitions under competing policies");
  std::string sim_config, sim_format = "text";
  bool sim_zero_bias = false;
  std::size_t sim_pool = 0, sim_slots = 0, sim_trials = 0;
  uint64_t sim_seed = kDefaultSeed;
  std::vector<std::string> sim_policies;
  sim->add_option("--config", sim_config, "Experiment config file (key: value)");
  sim->add_flag("--zero-bias", sim_zero_bias,
                "Use the zero-bias control configuration");
  sim->add_option("--pool", sim_pool, "Override candidate pool size per trial");
  sim->add_option("--slots", sim_slots, "Override funded slots per trial");
  sim->add_option("--trials", sim_trials, "Override trial count");
  sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
  sim->add_option("--policy", sim_policies,
                  "Policies to run: naive, rcf, true (repeatable; default all)")
      ->check(CLI::IsMember({"naive", "rcf", "true"}))
      ->delimiter(',');
  add_format_option(sim, &sim_format);
  sim->callback([&] {
    if (!sim_config.empty() && sim_zero_bias) {
      std::fprintf(stderr, "error: --config and --zero-bias are mutually exclusive\n");
      std::exit(1);
    }
    rcf_simconfig* cfg = nullptr;
    if (!sim_config.empty())
      check(rcf_simconfig_load(resolve_input(sim_config).c_str(), &cfg));
    else if (sim_zero_bias)
      check(rcf_simconfig_zero_bias(&cfg));
    else
      check(rcf_simconfig_default(&cfg));
    if (sim_pool) check(rcf_simconfig_set_pool(cfg, sim_pool));
    if (sim_slots) check(rcf_simconfig_set_slots(cfg, sim_slots));
    if (sim_trials) check(rcf_simconfig_set_trials(cfg, sim_trials));

    unsigned mask = 0;
    for (const auto& p : sim_policies)
      mask |= p == "naive" ? RCF_POLICY_NAIVE : p == "rcf" ? RCF_POLICY_RCF : RCF_POLICY_TRUE;
    if (mask == 0) mask = RCF_POLICY_NAIVE | RCF_POLICY_RCF | RCF_POLICY_TRUE;

    rcf_report* rep = nullptr;
    check(rcf_simulate_report(cfg, mask, sim_seed, parse_format(sim_format), &rep));
    print_report(rep);
    rcf_simconfig_free(cfg);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}
