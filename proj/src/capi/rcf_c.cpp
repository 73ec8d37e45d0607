#include "rcf/rcf.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <exception>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "core/csv.hpp"
#include "core/empirical.hpp"
#include "core/errors.hpp"
#include "core/forecast.hpp"
#include "core/records.hpp"
#include "core/refclass.hpp"
#include "core/report.hpp"
#include "core/selection.hpp"
#include "core/simconfig.hpp"
#include "core/stats.hpp"
#include "core/viability.hpp"

/* ---- handle types ------------------------------------------------------ */

struct rcf_dataset {
  std::vector<rcf::ProjectRecord> records;
};
struct rcf_class {
  rcf::ReferenceClass cls;
};
struct rcf_report {
  std::string text;
};
struct rcf_simconfig {
  rcf::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

rcf_status fail(rcf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn` and maps thrown errors onto status codes.
template <typename Fn>
rcf_status guarded(Fn&& fn) {
  try {
    fn();
    return RCF_OK;
  } catch (const rcf::ClassTooSmallError& e) {
    return fail(RCF_ERR_CLASS_TOO_SMALL, e.what());
  } catch (const rcf::ParseError& e) {
    return fail(RCF_ERR_PARSE, e.what());
  } catch (const rcf::ValidationError& e) {
    return fail(RCF_ERR_VALIDATION, e.what());
  } catch (const rcf::DomainError& e) {
    return fail(RCF_ERR_DOMAIN, e.what());
  } catch (const rcf::Error& e) {
    return fail(RCF_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(RCF_ERR_INTERNAL, e.what());
  }
}

bool null_arg(const void* p) { return p == nullptr; }

rcf_status need(bool ok, const char* what) {
  if (ok) return RCF_OK;
  return fail(RCF_ERR_ARGUMENT, std::string("invalid argument: ") + what);
}

rcf::InaccuracyKind to_kind(rcf_kind k) {
  return k == RCF_KIND_TRAFFIC ? rcf::InaccuracyKind::traffic_inaccuracy
                               : rcf::InaccuracyKind::cost_overrun;
}

rcf::ClassFilter to_filter(const rcf_filter* f) {
  rcf::ClassFilter out;
  if (!f) return out;
  for (int i = 0; i < rcf::kNumProjectTypes; ++i)
    if (f->type_mask & (1u << i)) out.types.insert(static_cast<rcf::ProjectType>(i));
  for (int i = 0; i < rcf::kNumRegions; ++i)
    if (f->region_mask & (1u << i)) out.regions.insert(static_cast<rcf::Region>(i));
  if (f->year_min != INT32_MIN || f->year_max != INT32_MAX)
    out.year_range = std::make_pair(static_cast<int>(f->year_min), static_cast<int>(f->year_max));
  if (f->min_size > 0) out.min_size = static_cast<std::size_t>(f->min_size);
  return out;
}

// Observations of `kind` among records passing `filter`, with group labels.
struct LabeledObs {
  const rcf::ProjectRecord* record;
  double value;
};

std::vector<LabeledObs> filtered_observations(const rcf_dataset* dataset,
                                              const rcf::ClassFilter& filter,
                                              rcf::InaccuracyKind kind) {
  std::vector<LabeledObs> out;
  for (const auto& r : dataset->records) {
    if (!rcf::matches(filter, r)) continue;
    if (kind == rcf::InaccuracyKind::cost_overrun) {
      if (!r.actual_cost) continue;
      out.push_back({&r, rcf::cost_overrun(r)});
    } else {
      if (!r.estimated_traffic || !r.actual_traffic) continue;
      out.push_back({&r, rcf::traffic_inaccuracy(r)});
    }
  }
  return out;
}

std::vector<double> values_of(const std::vector<LabeledObs>& obs) {
  std::vector<double> v;
  v.reserve(obs.size());
  for (const auto& o : obs) v.push_back(o.value);
  return v;
}

rcf_report* make_report(std::string text) { return new rcf_report{std::move(text)}; }

void fill_test_result(const rcf::TestResult& t, rcf_test_result* out) {
  std::memset(out, 0, sizeof(*out));
  std::snprintf(out->test_name, sizeof(out->test_name), "%s", t.test_name.c_str());
  out->statistic = t.statistic;
  out->p_value = t.p_value;
  out->reject_at_5pct = t.reject_at_5pct ? 1 : 0;
  auto get = [&](const char* key, double fallback) {
    auto it = t.metadata.find(key);
    return it == t.metadata.end() ? fallback : it->second;
  };
  out->df = get("df", 0.0);
  out->slope = get("slope", 0.0);
  out->mean_a = get("mean", get("mean_a", 0.0));
  out->mean_b = get("mean_b", 0.0);
}

std::string quantile_label(double q) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "q%02d", static_cast<int>(std::lround(q * 100.0)));
  return buf;
}

}  // namespace

/* ---- misc -------------------------------------------------------------- */

extern "C" {

const char* rcf_version(void) { return "1.0.0"; }

const char* rcf_strerror(rcf_status status) {
  switch (status) {
    case RCF_OK: return "ok";
    case RCF_ERR_ARGUMENT: return "invalid argument";
    case RCF_ERR_PARSE: return "parse error";
    case RCF_ERR_VALIDATION: return "validation error";
    case RCF_ERR_DOMAIN: return "domain error";
    case RCF_ERR_CLASS_TOO_SMALL: return "reference class too small";
    case RCF_ERR_IO: return "i/o error";
    case RCF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rcf_last_error(void) { return g_last_error.c_str(); }

const char* rcf_report_text(const rcf_report* report) {
  return report ? report->text.c_str() : "";
}

size_t rcf_report_length(const rcf_report* report) { return report ? report->text.size() : 0; }

void rcf_report_free(rcf_report* report) { delete report; }

/* ---- scalar measures --------------------------------------------------- */

rcf_status rcf_cost_overrun(double estimated, double actual, double* out) {
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    if (!(estimated > 0.0)) throw rcf::DomainError("estimated cost must be > 0");
    *out = 100.0 * (actual - estimated) / estimated;
  });
}

rcf_status rcf_traffic_inaccuracy(double estimated, double actual, double* out) {
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    if (!(estimated > 0.0)) throw rcf::DomainError("estimated traffic must be > 0");
    *out = 100.0 * (actual - estimated) / estimated;
  });
}

rcf_status rcf_overestimate_from_shortfall(double inaccuracy_pct, double* out) {
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = rcf::overestimate_from_shortfall(inaccuracy_pct); });
}

/* ---- datasets ---------------------------------------------------------- */

rcf_status rcf_dataset_load(const char* path, rcf_dataset** out) {
  if (auto s = need(!null_arg(path), "path")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    auto handle = std::make_unique<rcf_dataset>();
    handle->records = rcf::load_dataset(path);
    *out = handle.release();
  });
}

rcf_status rcf_dataset_parse(const char* text, rcf_dataset** out) {
  if (auto s = need(!null_arg(text), "text")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    std::istringstream in{std::string(text)};
    auto handle = std::make_unique<rcf_dataset>();
    handle->records = rcf::parse_dataset(in);
    *out = handle.release();
  });
}

void rcf_dataset_free(rcf_dataset* dataset) { delete dataset; }

rcf_status rcf_dataset_size(const rcf_dataset* dataset, size_t* out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  *out = dataset->records.size();
  return RCF_OK;
}

rcf_status rcf_dataset_observation_count(const rcf_dataset* dataset, rcf_kind kind, size_t* out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    *out = rcf::observations(dataset->records, to_kind(kind)).size();
  });
}

rcf_status rcf_ingest_report(const rcf_dataset* dataset, const char* source_label,
                             rcf_format format, rcf_report** out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    std::size_t by_type[rcf::kNumProjectTypes] = {};
    for (const auto& r : dataset->records) ++by_type[static_cast<int>(r.type)];
    const auto cost = rcf::observations(dataset->records, rcf::InaccuracyKind::cost_overrun);
    const auto traffic =
        rcf::observations(dataset->records, rcf::InaccuracyKind::traffic_inaccuracy);
    const std::string source = source_label ? source_label : "";

    if (format == RCF_FORMAT_CSV) {
      rcf::CsvReport csv({"field", "value"});
      csv.row({"source", source});
      csv.row({"records", std::to_string(dataset->records.size())});
      for (int i = 0; i < rcf::kNumProjectTypes; ++i)
        csv.row({"type_" + std::string(rcf::to_string(static_cast<rcf::ProjectType>(i))),
                 std::to_string(by_type[i])});
      csv.row({"cost_observations", std::to_string(cost.size())});
      csv.row({"traffic_observations", std::to_string(traffic.size())});
      *out = make_report(csv.str());
      return;
    }
    rcf::TextReport rep;
    rep.field("report", "ingest");
    rep.field("source", source);
    rep.field("records", dataset->records.size());
    for (int i = 0; i < rcf::kNumProjectTypes; ++i)
      rep.field("type_" + std::string(rcf::to_string(static_cast<rcf::ProjectType>(i))),
                by_type[i]);
    rep.field("cost_observations", cost.size());
    rep.field("traffic_observations", traffic.size());
    *out = make_report(rep.str());
  });
}

/* ---- filters / stats --------------------------------------------------- */

void rcf_filter_init(rcf_filter* filter) {
  if (!filter) return;
  filter->type_mask = 0;
  filter->region_mask = 0;
  filter->year_min = INT32_MIN;
  filter->year_max = INT32_MAX;
  filter->min_size = 0;
}

void rcf_stats_options_init(rcf_stats_options* options) {
  if (!options) return;
  options->kind = RCF_KIND_COST;
  options->group_by = RCF_GROUP_NONE;
  options->band_halfwidth = 20.0;
  options->exclude_outliers = 0;
  options->format = RCF_FORMAT_TEXT;
}

namespace {

struct StatsData {
  std::vector<rcf::DatasetSummary> summaries;
  std::vector<std::string> excluded_ids;
  std::size_t observations = 0;
};

StatsData compute_stats(const rcf_dataset* dataset, const rcf_filter* filter,
                        const rcf_stats_options* options) {
  const auto kind = to_kind(options->kind);
  auto cf = to_filter(filter);
  auto obs = filtered_observations(dataset, cf, kind);

  StatsData data;
  if (options->exclude_outliers && !obs.empty()) {
    const auto values = values_of(obs);
    const auto split = rcf::robust_outliers(values, 3.0);
    std::vector<LabeledObs> kept;
    kept.reserve(split.kept.size());
    for (auto i : split.kept) kept.push_back(obs[i]);
    for (auto i : split.excluded) data.excluded_ids.push_back(obs[i].record->id);
    obs = std::move(kept);
  }
  data.observations = obs.size();

  std::map<std::string, std::vector<double>> groups;
  for (const auto& o : obs) {
    std::string key;
    switch (options->group_by) {
      case RCF_GROUP_NONE: key = "all"; break;
      case RCF_GROUP_TYPE: key = rcf::to_string(o.record->type); break;
      case RCF_GROUP_REGION: key = rcf::to_string(o.record->region); break;
      case RCF_GROUP_TYPE_REGION:
        key = std::string(rcf::to_string(o.record->type)) + "/" +
              std::string(rcf::to_string(o.record->region));
        break;
      default: throw rcf::DomainError("unknown group_by");
    }
    groups[key].push_back(o.value);
  }
  for (auto& [key, values] : groups)
    data.summaries.push_back(rcf::summarize_values(values, options->band_halfwidth, key));
  return data;
}

}  // namespace

rcf_status rcf_stats_summaries(const rcf_dataset* dataset, const rcf_filter* filter,
                               const rcf_stats_options* options,
                               rcf_summary_row** rows, size_t* count) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(options), "options")) return s;
  if (auto s = need(!null_arg(rows), "rows")) return s;
  if (auto s = need(!null_arg(count), "count")) return s;
  return guarded([&] {
    const auto data = compute_stats(dataset, filter, options);
    auto* arr = new rcf_summary_row[data.summaries.size()]();
    for (std::size_t i = 0; i < data.summaries.size(); ++i) {
      const auto& s = data.summaries[i];
      std::snprintf(arr[i].group, sizeof(arr[i].group), "%s", s.group.c_str());
      arr[i].n = s.n;
      arr[i].mean = s.mean;
      arr[i].std_dev = s.std_dev;
      arr[i].std_dev_defined = s.std_dev_defined ? 1 : 0;
      arr[i].share_with_overrun = s.share_with_overrun;
      arr[i].share_outside_band = s.share_outside_band;
    }
    *rows = arr;
    *count = data.summaries.size();
  });
}

void rcf_summary_rows_free(rcf_summary_row* rows) { delete[] rows; }

rcf_status rcf_stats_report(const rcf_dataset* dataset, const rcf_filter* filter,
                            const rcf_stats_options* options, rcf_report** out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(options), "options")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto data = compute_stats(dataset, filter, options);
    std::string excluded;
    for (const auto& id : data.excluded_ids) {
      if (!excluded.empty()) excluded += ",";
      excluded += id;
    }

    if (options->format == RCF_FORMAT_CSV) {
      rcf::CsvReport csv({"group", "n", "mean", "std_dev", "share_with_overrun",
                          "share_outside_band"});
      if (options->exclude_outliers)
        csv.comment("excluded_outliers", excluded.empty() ? "none" : excluded);
      for (const auto& s : data.summaries)
        csv.row({s.group, std::to_string(s.n), rcf::format_double(s.mean),
                 rcf::format_double(s.std_dev), rcf::format_double(s.share_with_overrun),
                 rcf::format_double(s.share_outside_band)});
      *out = make_report(csv.str());
      return;
    }

    rcf::TextReport rep;
    rep.field("report", "stats");
    rep.field("kind", rcf::to_string(to_kind(options->kind)));
    rep.field("band_halfwidth", options->band_halfwidth);
    rep.field("observations", data.observations);
    if (options->exclude_outliers)
      rep.field("excluded_outliers", excluded.empty() ? "none" : excluded);
    rep.field("groups", data.summaries.size());
    for (const auto& s : data.summaries) {
      rep.field("group", s.group);
      rep.field("n", s.n);
      rep.field("mean", s.mean);
      rep.field("std_dev", s.std_dev);
      if (!s.std_dev_defined) rep.field("std_dev_defined", "0");
      rep.field("share_with_overrun", s.share_with_overrun);
      rep.field("share_outside_band", s.share_outside_band);
    }
    *out = make_report(rep.str());
  });
}

rcf_status rcf_test_mean_nonzero(const rcf_dataset* dataset, const rcf_filter* filter,
                                 rcf_kind kind, rcf_test_result* out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto obs = filtered_observations(dataset, to_filter(filter), to_kind(kind));
    fill_test_result(rcf::test_mean_nonzero(values_of(obs)), out);
  });
}

rcf_status rcf_test_group_difference(const rcf_dataset* dataset, const rcf_filter* filter_a,
                                     const rcf_filter* filter_b, rcf_kind kind,
                                     rcf_test_result* out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto a = filtered_observations(dataset, to_filter(filter_a), to_kind(kind));
    const auto b = filtered_observations(dataset, to_filter(filter_b), to_kind(kind));
    fill_test_result(rcf::test_group_difference(values_of(a), values_of(b)), out);
  });
}

rcf_status rcf_test_time_trend(const rcf_dataset* dataset, const rcf_filter* filter,
                               rcf_kind kind, rcf_test_result* out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto obs = filtered_observations(dataset, to_filter(filter), to_kind(kind));
    std::vector<rcf::YearValue> points;
    points.reserve(obs.size());
    for (const auto& o : obs) points.push_back({o.record->decision_year, o.value});
    fill_test_result(rcf::test_time_trend(points), out);
  });
}

/* ---- reference classes -------------------------------------------------- */

rcf_status rcf_class_build(const rcf_dataset* dataset, const rcf_filter* filter,
                           rcf_kind kind, const char* provenance, rcf_class** out) {
  if (auto s = need(!null_arg(dataset), "dataset")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    auto cls = rcf::build_reference_class(dataset->records, to_filter(filter), to_kind(kind),
                                          provenance ? provenance : "");
    *out = new rcf_class{std::move(cls)};
  });
}

rcf_status rcf_class_load(const char* path, rcf_kind kind, int min_size, rcf_class** out) {
  if (auto s = need(!null_arg(path), "path")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    auto cls = rcf::load_class_csv(path, to_kind(kind),
                                   min_size > 0 ? static_cast<std::size_t>(min_size) : 2);
    *out = new rcf_class{std::move(cls)};
  });
}

rcf_status rcf_class_save(const rcf_class* cls, const char* path) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(path), "path")) return s;
  return guarded([&] { rcf::save_class_csv(cls->cls, path); });
}

void rcf_class_free(rcf_class* cls) { delete cls; }

rcf_status rcf_class_size(const rcf_class* cls, size_t* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  *out = cls->cls.size();
  return RCF_OK;
}

rcf_status rcf_class_mean(const rcf_class* cls, double* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = cls->cls.distribution.mean(); });
}

rcf_status rcf_class_std_dev(const rcf_class* cls, double* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = rcf::sample_std_dev(cls->cls.distribution.values()); });
}

rcf_status rcf_class_ecdf(const rcf_class* cls, double x, double* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = cls->cls.distribution.ecdf(x); });
}

rcf_status rcf_class_quantile(const rcf_class* cls, double q, double* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = cls->cls.distribution.quantile(q); });
}

rcf_status rcf_class_bootstrap_ci(const rcf_class* cls, int use_quantile, double q,
                                  double level, size_t replicates, uint64_t seed,
                                  double* lo, double* hi) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(lo), "lo")) return s;
  if (auto s = need(!null_arg(hi), "hi")) return s;
  return guarded([&] {
    const auto ci = rcf::bootstrap_ci(
        cls->cls.distribution,
        use_quantile ? rcf::BootstrapStatistic::quantile : rcf::BootstrapStatistic::mean, q,
        level, replicates, seed);
    *lo = ci.lo;
    *hi = ci.hi;
  });
}

rcf_status rcf_class_report(const rcf_class* cls, rcf_format format, rcf_report** out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto& d = cls->cls.distribution;
    const double sd = rcf::sample_std_dev(d.values());
    if (format == RCF_FORMAT_CSV) {
      rcf::CsvReport csv({"field", "value"});
      csv.row({"kind", std::string(rcf::to_string(cls->cls.kind))});
      csv.row({"provenance", cls->cls.provenance});
      csv.row({"filter", rcf::filter_description(cls->cls.filter)});
      csv.row({"n", std::to_string(d.size())});
      csv.row({"mean", rcf::format_double(d.mean())});
      csv.row({"std_dev", rcf::format_double(sd)});
      csv.row({"min", rcf::format_double(d.min())});
      csv.row({"q25", rcf::format_double(d.quantile(0.25))});
      csv.row({"median", rcf::format_double(d.quantile(0.5))});
      csv.row({"q75", rcf::format_double(d.quantile(0.75))});
      csv.row({"max", rcf::format_double(d.max())});
      *out = make_report(csv.str());
      return;
    }
    rcf::TextReport rep;
    rep.field("report", "class");
    rep.field("kind", rcf::to_string(cls->cls.kind));
    rep.field("provenance", cls->cls.provenance);
    rep.field("filter", rcf::filter_description(cls->cls.filter));
    rep.field("n", d.size());
    rep.field("mean", d.mean());
    rep.field("std_dev", sd);
    rep.field("min", d.min());
    rep.field("q25", d.quantile(0.25));
    rep.field("median", d.quantile(0.5));
    rep.field("q75", d.quantile(0.75));
    rep.field("max", d.max());
    *out = make_report(rep.str());
  });
}

rcf_status rcf_class_quantile_curve(const rcf_class* cls, rcf_report** out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    rcf::CsvReport csv({"q", "quantile_value"});
    for (int i = 0; i <= 100; ++i) {
      const double q = static_cast<double>(i) / 100.0;
      csv.row({rcf::format_double(q), rcf::format_double(cls->cls.distribution.quantile(q))});
    }
    *out = make_report(csv.str());
  });
}

rcf_status rcf_class_histogram(const rcf_class* cls, size_t bins, rcf_report** out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto hist = rcf::histogram(cls->cls.distribution, bins);
    rcf::CsvReport csv({"bin_lo", "bin_hi", "count"});
    for (const auto& b : hist)
      csv.row({rcf::format_double(b.lo), rcf::format_double(b.hi), std::to_string(b.count)});
    *out = make_report(csv.str());
  });
}

/* ---- uplifts and forecasts ---------------------------------------------- */

rcf_status rcf_required_uplift(const rcf_class* cls, double acceptable_risk, double* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = rcf::required_uplift(cls->cls.distribution, acceptable_risk); });
}

rcf_status rcf_uplift_schedule(const rcf_class* cls, const double* risks, size_t count,
                               rcf_report** out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(risks != nullptr && count > 0, "risks")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto sched = rcf::uplift_schedule(cls->cls.distribution,
                                            std::span<const double>(risks, count),
                                            cls->cls.provenance);
    rcf::CsvReport csv({"risk", "uplift"});
    for (const auto& p : sched.points)
      csv.row({rcf::format_double(p.acceptable_risk), rcf::format_double(p.uplift_pct)});
    *out = make_report(csv.str());
  });
}

rcf_status rcf_forecast(const rcf_class* cls, double base_estimate, double acceptable_risk,
                        double coverage, rcf_forecast_result* out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto f = rcf::reference_class_forecast(base_estimate, cls->cls.distribution,
                                                 acceptable_risk, coverage, cls->cls.provenance);
    out->base_estimate = f.base_estimate;
    out->acceptable_risk = f.acceptable_risk;
    out->uplift_pct = f.uplift_pct;
    out->adjusted_estimate = f.adjusted_estimate;
    out->coverage = f.coverage;
    out->interval_lo = f.interval.lo;
    out->interval_hi = f.interval.hi;
    out->class_median_pct = f.class_median_pct;
    out->median_adjusted_estimate = f.median_adjusted_estimate;
    out->class_size = f.class_size;
  });
}

rcf_status rcf_forecast_report(const rcf_class* cls, const char* class_label,
                               double base_estimate, double acceptable_risk, double coverage,
                               rcf_format format, rcf_report** out) {
  if (auto s = need(!null_arg(cls), "class")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const std::string label =
        class_label && class_label[0] ? class_label : cls->cls.provenance;
    const auto f = rcf::reference_class_forecast(base_estimate, cls->cls.distribution,
                                                 acceptable_risk, coverage, label);
    if (format == RCF_FORMAT_CSV) {
      rcf::CsvReport csv({"field", "value"});
      csv.row({"reference_class", f.reference_class});
      csv.row({"class_size", std::to_string(f.class_size)});
      csv.row({"base_estimate", rcf::format_double(f.base_estimate)});
      csv.row({"acceptable_risk", rcf::format_double(f.acceptable_risk)});
      csv.row({"uplift_pct", rcf::format_double(f.uplift_pct)});
      csv.row({"adjusted_estimate", rcf::format_double(f.adjusted_estimate)});
      csv.row({"coverage", rcf::format_double(f.coverage)});
      csv.row({"interval_lo", rcf::format_double(f.interval.lo)});
      csv.row({"interval_hi", rcf::format_double(f.interval.hi)});
      csv.row({"class_median_pct", rcf::format_double(f.class_median_pct)});
      csv.row({"median_adjusted_estimate", rcf::format_double(f.median_adjusted_estimate)});
      *out = make_report(csv.str());
      return;
    }
    rcf::TextReport rep;
    rep.field("report", "forecast");
    rep.field("reference_class", f.reference_class);
    rep.field("class_size", f.class_size);
    rep.field("base_estimate", f.base_estimate);
    rep.field("acceptable_risk", f.acceptable_risk);
    rep.field("uplift_pct", f.uplift_pct);
    rep.field("adjusted_estimate", f.adjusted_estimate);
    rep.field("coverage", f.coverage);
    rep.field("interval_lo", f.interval.lo);
    rep.field("interval_hi", f.interval.hi);
    rep.field("class_median_pct", f.class_median_pct);
    rep.field("median_adjusted_estimate", f.median_adjusted_estimate);
    *out = make_report(rep.str());
  });
}

/* ---- viability ----------------------------------------------------------- */

rcf_status rcf_appraisal_load(const char* path, rcf_appraisal* out) {
  if (auto s = need(!null_arg(path), "path")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto rows = rcf::csv::read_file(path);
    if (rows.size() < 2) throw rcf::ParseError(std::string(path) + ": expected header + one row");
    const auto& header = rows[0].fields;
    const std::vector<std::string> want = {"forecast_cost", "forecast_annual_benefit",
                                           "horizon_years", "discount_rate"};
    if (header != want)
      throw rcf::ParseError(std::string(path) +
                            ": expected header forecast_cost,forecast_annual_benefit,"
                            "horizon_years,discount_rate");
    const auto& row = rows[1].fields;
    if (row.size() != 4)
      throw rcf::ParseError(std::string(path) + ": expected 4 fields in the data row");
    auto num = [&](const std::string& s, const char* field) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v))
          throw rcf::ParseError("");
        return v;
      } catch (...) {
        throw rcf::ParseError(std::string(path) + ": field '" + field +
                              "' is not a finite number: '" + s + "'");
      }
    };
    rcf::AppraisalInput a;
    a.forecast_cost = num(row[0], "forecast_cost");
    a.forecast_annual_benefit = num(row[1], "forecast_annual_benefit");
    a.horizon_years = static_cast<int>(num(row[2], "horizon_years"));
    a.discount_rate = num(row[3], "discount_rate");
    rcf::validate(a);
    out->forecast_cost = a.forecast_cost;
    out->forecast_annual_benefit = a.forecast_annual_benefit;
    out->horizon_years = a.horizon_years;
    out->discount_rate = a.discount_rate;
  });
}

namespace {

rcf::AppraisalInput to_appraisal(const rcf_appraisal* a) {
  rcf::AppraisalInput out;
  out.forecast_cost = a->forecast_cost;
  out.forecast_annual_benefit = a->forecast_annual_benefit;
  out.horizon_years = a->horizon_years;
  out.discount_rate = a->discount_rate;
  return out;
}

void viability_fields(const rcf::AppraisalInput& a, const rcf::ViabilityReport& rep,
                      const std::string& mode, int threads, bool with_seed,
                      rcf_format format, rcf_report** out) {
  std::vector<std::pair<std::string, std::string>> fields;
  auto add = [&](const std::string& k, const std::string& v) { fields.emplace_back(k, v); };
  add("forecast_cost", rcf::format_double(a.forecast_cost));
  add("forecast_annual_benefit", rcf::format_double(a.forecast_annual_benefit));
  add("horizon_years", std::to_string(a.horizon_years));
  add("discount_rate", rcf::format_double(a.discount_rate));
  add("forecast_bcr", rcf::format_double(rep.forecast_bcr));
  add("mode", mode);
  add("samples", std::to_string(rep.samples));
  if (with_seed) {
    add("seed", std::to_string(rep.seed));
    add("threads", std::to_string(threads));
  }
  add("p_nonviable", rcf::format_double(rep.p_nonviable));
  add("bcr_mean", rcf::format_double(rep.bcr_mean));
  for (const auto& [q, v] : rep.bcr_quantiles)
    add("bcr_" + quantile_label(q), rcf::format_double(v));
  add("npv_mean", rcf::format_double(rep.npv_mean));
  for (const auto& [q, v] : rep.npv_quantiles)
    add("npv_" + quantile_label(q), rcf::format_double(v));
  add("irr_median", rep.irr_estimate ? rcf::format_double(*rep.irr_estimate) : "undefined");

  if (format == RCF_FORMAT_CSV) {
    rcf::CsvReport csv({"field", "value"});
    for (const auto& [k, v] : fields) csv.row({k, v});
    *out = make_report(csv.str());
    return;
  }
  rcf::TextReport text;
  text.field("report", "duediligence");
  for (const auto& [k, v] : fields) text.field(k, v);
  *out = make_report(text.str());
}

}  // namespace

rcf_status rcf_forecast_bcr(const rcf_appraisal* appraisal, double* out) {
  if (auto s = need(!null_arg(appraisal), "appraisal")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] { *out = rcf::forecast_bcr(to_appraisal(appraisal)); });
}

rcf_status rcf_npv(const double* cashflows, size_t count, double rate, double* out) {
  if (auto s = need(cashflows != nullptr && count > 0, "cashflows")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    *out = rcf::npv(std::span<const double>(cashflows, count), rate);
  });
}

rcf_status rcf_irr(const double* cashflows, size_t count, double* out, int* defined) {
  if (auto s = need(cashflows != nullptr && count > 0, "cashflows")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  if (auto s = need(!null_arg(defined), "defined")) return s;
  return guarded([&] {
    const auto r = rcf::irr(std::span<const double>(cashflows, count));
    *defined = r.has_value() ? 1 : 0;
    *out = r.value_or(0.0);
  });
}

rcf_status rcf_ex_post_report(const rcf_appraisal* appraisal, double overrun_pct,
                              double benefit_factor, rcf_format format, rcf_report** out) {
  if (auto s = need(!null_arg(appraisal), "appraisal")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto a = to_appraisal(appraisal);
    const auto rep = rcf::ex_post_evaluate(a, overrun_pct, benefit_factor);
    viability_fields(a, rep, "expost", 0, false, format, out);
  });
}

rcf_status rcf_due_diligence_report(const rcf_appraisal* appraisal,
                                    const rcf_class* cost_class, double const_overrun_pct,
                                    const rcf_class* benefit_class, double const_benefit_factor,
                                    const rcf_dataset* paired, size_t samples, uint64_t seed,
                                    int threads, rcf_format format, rcf_report** out) {
  if (auto s = need(!null_arg(appraisal), "appraisal")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    const auto a = to_appraisal(appraisal);
    rcf::RealizationModel model;
    std::string mode;
    if (paired) {
      model.dependence = rcf::Dependence::paired;
      for (const auto& r : paired->records) {
        if (!r.actual_cost || !r.estimated_traffic || !r.actual_traffic) continue;
        model.pairs.emplace_back(rcf::cost_overrun(r), rcf::traffic_inaccuracy(r));
      }
      mode = "paired";
    } else {
      if (cost_class) model.cost_overrun_pct = cost_class->cls.distribution;
      else model.cost_overrun_pct = const_overrun_pct;
      if (benefit_class) model.benefit_source = benefit_class->cls.distribution;
      else model.benefit_source = const_benefit_factor;
      mode = cost_class || benefit_class ? "independent" : "constant";
    }
    const auto rep = rcf::monte_carlo_viability(a, model, samples, seed, threads);
    viability_fields(a, rep, mode, threads, true, format, out);
  });
}

/* ---- selection experiment ------------------------------------------------ */

rcf_status rcf_simconfig_default(rcf_simconfig** out) {
  if (auto s = need(!null_arg(out), "out")) return s;
  *out = new rcf_simconfig{rcf::ExperimentConfig::defaults()};
  return RCF_OK;
}

rcf_status rcf_simconfig_zero_bias(rcf_simconfig** out) {
  if (auto s = need(!null_arg(out), "out")) return s;
  *out = new rcf_simconfig{rcf::ExperimentConfig::zero_bias()};
  return RCF_OK;
}

rcf_status rcf_simconfig_load(const char* path, rcf_simconfig** out) {
  if (auto s = need(!null_arg(path), "path")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  return guarded([&] {
    *out = new rcf_simconfig{rcf::load_experiment_config(path)};
  });
}

void rcf_simconfig_free(rcf_simconfig* config) { delete config; }

rcf_status rcf_simconfig_set_pool(rcf_simconfig* config, size_t pool_size) {
  if (auto s = need(!null_arg(config), "config")) return s;
  if (auto s = need(pool_size > 0, "pool_size")) return s;
  config->cfg.pool_size = pool_size;
  return RCF_OK;
}

rcf_status rcf_simconfig_set_slots(rcf_simconfig* config, size_t budget_slots) {
  if (auto s = need(!null_arg(config), "config")) return s;
  if (auto s = need(budget_slots > 0, "budget_slots")) return s;
  config->cfg.budget_slots = budget_slots;
  return RCF_OK;
}

rcf_status rcf_simconfig_set_trials(rcf_simconfig* config, size_t trials) {
  if (auto s = need(!null_arg(config), "config")) return s;
  if (auto s = need(trials > 0, "trials")) return s;
  config->cfg.trials = trials;
  return RCF_OK;
}

rcf_status rcf_simulate_report(const rcf_simconfig* config, unsigned policy_mask,
                               uint64_t seed, rcf_format format, rcf_report** out) {
  if (auto s = need(!null_arg(config), "config")) return s;
  if (auto s = need(!null_arg(out), "out")) return s;
  if (auto s = need(policy_mask != 0, "policy_mask")) return s;
  return guarded([&] {
    std::vector<rcf::SelectionRule> policies;
    if (policy_mask & RCF_POLICY_NAIVE) policies.push_back(rcf::SelectionRule::naive_stated_bcr);
    if (policy_mask & RCF_POLICY_RCF) policies.push_back(rcf::SelectionRule::rcf_adjusted_bcr);
    if (policy_mask & RCF_POLICY_TRUE) policies.push_back(rcf::SelectionRule::true_bcr);
    const auto res = rcf::run_experiment(config->cfg, policies, seed);
    const bool both = (policy_mask & RCF_POLICY_NAIVE) && (policy_mask & RCF_POLICY_RCF);

    if (format == RCF_FORMAT_CSV) {
      rcf::CsvReport csv({"policy", "trials", "mean_funded_bcr", "ci_lo", "ci_hi",
                          "mean_unfunded_bcr", "mean_regret"});
      csv.comment("seed", std::to_string(res.seed));
      if (both)
        csv.comment("fraction_naive_below_rcf", rcf::format_double(res.fraction_naive_below_rcf));
      for (const auto& p : res.policies)
        csv.row({std::string(rcf::to_string(p.rule)), std::to_string(p.trials),
                 rcf::format_double(p.mean_funded_bcr), rcf::format_double(p.funded_ci.lo),
                 rcf::format_double(p.funded_ci.hi), rcf::format_double(p.mean_unfunded_bcr),
                 rcf::format_double(p.mean_regret)});
      *out = make_report(csv.str());
      return;
    }
    rcf::TextReport rep;
    rep.field("report", "simulate");
    rep.field("seed", std::to_string(res.seed));
    for (const auto& [type, corr] : res.derived_corrections) {
      rep.field("correction_" + std::string(rcf::to_string(type)) + "_uplift_pct",
                corr.uplift_pct);
      rep.field("correction_" + std::string(rcf::to_string(type)) + "_benefit_overestimate_pct",
                corr.benefit_overestimate_pct);
    }
    for (const auto& p : res.policies) {
      rep.field("policy", rcf::to_string(p.rule));
      rep.field("trials", p.trials);
      rep.field("mean_funded_bcr", p.mean_funded_bcr);
      rep.field("ci_lo", p.funded_ci.lo);
      rep.field("ci_hi", p.funded_ci.hi);
      rep.field("mean_unfunded_bcr", p.mean_unfunded_bcr);
      rep.field("mean_regret", p.mean_regret);
    }
    if (both) rep.field("fraction_naive_below_rcf", res.fraction_naive_below_rcf);
    *out = make_report(rep.str());
  });
}

} /* extern "C" */
