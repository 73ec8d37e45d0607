/* rcf — reference class forecasting toolkit, C API.
 *
 * Conventions:
 *   - Every function returns an rcf_status; results come back through out
 *     parameters. RCF_OK is 0.
 *   - On failure, rcf_last_error() returns a thread-local message describing
 *     what went wrong (valid until the next failing call on that thread).
 *   - Objects are opaque handles freed with their rcf_*_free function. Out
 *     parameters are untouched on failure.
 */
#ifndef RCF_H
#define RCF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcf_status {
  RCF_OK = 0,
  RCF_ERR_ARGUMENT = 1,        /* bad pointer / enum / parameter value */
  RCF_ERR_PARSE = 2,           /* malformed input text */
  RCF_ERR_VALIDATION = 3,      /* well-formed input breaking an invariant */
  RCF_ERR_DOMAIN = 4,          /* value outside an operation's domain */
  RCF_ERR_CLASS_TOO_SMALL = 5, /* reference class below minimum size */
  RCF_ERR_IO = 6,              /* file not readable/writable */
  RCF_ERR_INTERNAL = 7
} rcf_status;

typedef enum rcf_project_type {
  RCF_TYPE_RAIL = 0,
  RCF_TYPE_ROAD = 1,
  RCF_TYPE_BRIDGE_TUNNEL = 2,
  RCF_TYPE_ICT = 3,
  RCF_TYPE_OTHER = 4
} rcf_project_type;

typedef enum rcf_region {
  RCF_REGION_EUROPE = 0,
  RCF_REGION_NORTH_AMERICA = 1,
  RCF_REGION_EMERGING = 2,
  RCF_REGION_OTHER = 3
} rcf_region;

typedef enum rcf_kind {
  RCF_KIND_COST = 0,   /* percent cost overrun */
  RCF_KIND_TRAFFIC = 1 /* percent traffic inaccuracy */
} rcf_kind;

typedef enum rcf_group_by {
  RCF_GROUP_NONE = 0,
  RCF_GROUP_TYPE = 1,
  RCF_GROUP_REGION = 2,
  RCF_GROUP_TYPE_REGION = 3
} rcf_group_by;

typedef enum rcf_format { RCF_FORMAT_TEXT = 0, RCF_FORMAT_CSV = 1 } rcf_format;

/* bitmask for rcf_simulate */
enum {
  RCF_POLICY_NAIVE = 1,
  RCF_POLICY_RCF = 2,
  RCF_POLICY_TRUE = 4
};

typedef struct rcf_dataset rcf_dataset;     /* validated project records */
typedef struct rcf_class rcf_class;         /* reference class + distribution */
typedef struct rcf_report rcf_report;       /* formatted report text */
typedef struct rcf_simconfig rcf_simconfig; /* selection experiment config */

const char* rcf_version(void);
const char* rcf_strerror(rcf_status status);
/* Thread-local message for the most recent failure on this thread. */
const char* rcf_last_error(void);

/* ---- reports ---------------------------------------------------------- */

const char* rcf_report_text(const rcf_report* report);
size_t rcf_report_length(const rcf_report* report);
void rcf_report_free(rcf_report* report);

/* ---- scalar measures -------------------------------------------------- */

/* 100 * (actual - estimated) / estimated; estimated must be > 0. */
rcf_status rcf_cost_overrun(double estimated, double actual, double* out);
rcf_status rcf_traffic_inaccuracy(double estimated, double actual, double* out);
/* Shortfall viewpoint flip: inaccuracy i percent -> forecast overestimated
 * the outcome by 100*(-i/100)/(1+i/100) percent. Involution. i > -100. */
rcf_status rcf_overestimate_from_shortfall(double inaccuracy_pct, double* out);

/* ---- datasets --------------------------------------------------------- */

/* Parse + validate the dataset CSV schema:
 * id,name,project_type,region,decision_year,completion_year,estimated_cost,
 * actual_cost,estimated_traffic,actual_traffic (empty = absent optional). */
rcf_status rcf_dataset_load(const char* path, rcf_dataset** out);
rcf_status rcf_dataset_parse(const char* text, rcf_dataset** out);
void rcf_dataset_free(rcf_dataset* dataset);
rcf_status rcf_dataset_size(const rcf_dataset* dataset, size_t* out);
/* Number of records with the outturn fields `kind` needs. */
rcf_status rcf_dataset_observation_count(const rcf_dataset* dataset, rcf_kind kind, size_t* out);
rcf_status rcf_ingest_report(const rcf_dataset* dataset, const char* source_label,
                             rcf_format format, rcf_report** out);

/* ---- filters ---------------------------------------------------------- */

typedef struct rcf_filter {
  uint32_t type_mask;   /* OR of (1 << rcf_project_type); 0 = all types */
  uint32_t region_mask; /* OR of (1 << rcf_region); 0 = all regions */
  int32_t year_min;     /* decision year, inclusive; INT32_MIN = open */
  int32_t year_max;     /* INT32_MAX = open */
  int32_t min_size;     /* minimum class size; <= 0 = default (10) */
} rcf_filter;

void rcf_filter_init(rcf_filter* filter);

/* ---- descriptive + inferential statistics ----------------------------- */

typedef struct rcf_stats_options {
  rcf_kind kind;
  rcf_group_by group_by;
  double band_halfwidth;   /* |value| > band counts as "outside"; default 20 */
  int exclude_outliers;    /* robust z (median/MAD) > 3 screened out, listed */
  rcf_format format;
} rcf_stats_options;

void rcf_stats_options_init(rcf_stats_options* options);

typedef struct rcf_summary_row {
  char group[64];
  size_t n;
  double mean;
  double std_dev;
  int std_dev_defined;         /* 0 when n == 1 */
  double share_with_overrun;   /* fraction of observations > 0 */
  double share_outside_band;
} rcf_summary_row;

/* Grouped summaries; optional filter narrows the records first (its min_size
 * is ignored here). Caller frees *rows with rcf_summary_rows_free. */
rcf_status rcf_stats_summaries(const rcf_dataset* dataset, const rcf_filter* filter,
                               const rcf_stats_options* options,
                               rcf_summary_row** rows, size_t* count);
void rcf_summary_rows_free(rcf_summary_row* rows);
rcf_status rcf_stats_report(const rcf_dataset* dataset, const rcf_filter* filter,
                            const rcf_stats_options* options, rcf_report** out);

typedef struct rcf_test_result {
  char test_name[32];
  double statistic;
  double p_value;
  int reject_at_5pct;
  double df;
  double slope;     /* time trend only; percent per year */
  double mean_a;    /* mean (one-sample) or first group mean */
  double mean_b;    /* second group mean (group difference only) */
} rcf_test_result;

/* One-sample t of mean inaccuracy == 0 over the filtered observations. */
rcf_status rcf_test_mean_nonzero(const rcf_dataset* dataset, const rcf_filter* filter,
                                 rcf_kind kind, rcf_test_result* out);
/* Welch two-sample t across two filters. */
rcf_status rcf_test_group_difference(const rcf_dataset* dataset, const rcf_filter* filter_a,
                                     const rcf_filter* filter_b, rcf_kind kind,
                                     rcf_test_result* out);
/* OLS time-trend t-test of inaccuracy on decision year. */
rcf_status rcf_test_time_trend(const rcf_dataset* dataset, const rcf_filter* filter,
                               rcf_kind kind, rcf_test_result* out);

/* ---- reference classes ------------------------------------------------ */

rcf_status rcf_class_build(const rcf_dataset* dataset, const rcf_filter* filter,
                           rcf_kind kind, const char* provenance, rcf_class** out);
/* Class CSV schema: project_id,value. min_size <= 0 accepts any n >= 2. */
rcf_status rcf_class_load(const char* path, rcf_kind kind, int min_size, rcf_class** out);
rcf_status rcf_class_save(const rcf_class* cls, const char* path);
void rcf_class_free(rcf_class* cls);

rcf_status rcf_class_size(const rcf_class* cls, size_t* out);
rcf_status rcf_class_mean(const rcf_class* cls, double* out);
rcf_status rcf_class_std_dev(const rcf_class* cls, double* out);
/* Fraction of class observations <= x. */
rcf_status rcf_class_ecdf(const rcf_class* cls, double x, double* out);
/* Linear interpolation of order statistics; q in [0, 1]. Never extrapolates. */
rcf_status rcf_class_quantile(const rcf_class* cls, double q, double* out);
/* Percentile bootstrap CI; statistic is the mean (use_quantile == 0) or the
 * q-quantile. Deterministic in `seed`. */
rcf_status rcf_class_bootstrap_ci(const rcf_class* cls, int use_quantile, double q,
                                  double level, size_t replicates, uint64_t seed,
                                  double* lo, double* hi);
/* Text summary of the class (n, mean, sd, quartiles, provenance). */
rcf_status rcf_class_report(const rcf_class* cls, rcf_format format, rcf_report** out);
/* CSV "q,quantile_value" for q = 0.00, 0.01, ..., 1.00. */
rcf_status rcf_class_quantile_curve(const rcf_class* cls, rcf_report** out);
/* CSV "bin_lo,bin_hi,count" over equal-width bins. */
rcf_status rcf_class_histogram(const rcf_class* cls, size_t bins, rcf_report** out);

/* ---- uplifts and forecasts -------------------------------------------- */

/* Percent uplift so that P(outcome > uplifted budget) <= risk against the
 * class; risk in (0, 1]. Non-increasing in risk. */
rcf_status rcf_required_uplift(const rcf_class* cls, double acceptable_risk, double* out);
/* CSV "risk,uplift" over the grid (descending risk). */
rcf_status rcf_uplift_schedule(const rcf_class* cls, const double* risks, size_t count,
                               rcf_report** out);

typedef struct rcf_forecast_result {
  double base_estimate;
  double acceptable_risk;
  double uplift_pct;
  double adjusted_estimate;
  double coverage;
  double interval_lo;
  double interval_hi;
  double class_median_pct;
  double median_adjusted_estimate;
  size_t class_size;
} rcf_forecast_result;

rcf_status rcf_forecast(const rcf_class* cls, double base_estimate, double acceptable_risk,
                        double coverage, rcf_forecast_result* out);
rcf_status rcf_forecast_report(const rcf_class* cls, const char* class_label,
                               double base_estimate, double acceptable_risk, double coverage,
                               rcf_format format, rcf_report** out);

/* ---- viability -------------------------------------------------------- */

typedef struct rcf_appraisal {
  double forecast_cost;           /* capital cost at t=0, > 0 */
  double forecast_annual_benefit; /* constant benefit years 1..horizon, > 0 */
  int32_t horizon_years;          /* >= 1 */
  double discount_rate;           /* > -1 */
} rcf_appraisal;

/* CSV: header forecast_cost,forecast_annual_benefit,horizon_years,discount_rate
 * plus exactly one data row. */
rcf_status rcf_appraisal_load(const char* path, rcf_appraisal* out);
rcf_status rcf_forecast_bcr(const rcf_appraisal* appraisal, double* out);

rcf_status rcf_npv(const double* cashflows, size_t count, double rate, double* out);
/* Bisection on [-0.99, 10] to 1e-9. *defined = 0 when no sign change. */
rcf_status rcf_irr(const double* cashflows, size_t count, double* out, int* defined);

/* Deterministic single-scenario evaluation. */
rcf_status rcf_ex_post_report(const rcf_appraisal* appraisal, double overrun_pct,
                              double benefit_factor, rcf_format format, rcf_report** out);

/* Monte Carlo due diligence. Marginals:
 *   cost_class   != NULL -> resample overruns from it, else constant const_overrun_pct;
 *   benefit_class!= NULL -> resample traffic inaccuracies (multiplier 1 + i/100),
 *                           else constant const_benefit_factor (> 0).
 *   paired       != NULL -> resample observed (overrun, inaccuracy) pairs from the
 *                           dataset's records that carry both; overrides the marginals.
 * Sample i draws only from (seed, i): bit-identical for any thread count. */
rcf_status rcf_due_diligence_report(const rcf_appraisal* appraisal,
                                    const rcf_class* cost_class, double const_overrun_pct,
                                    const rcf_class* benefit_class, double const_benefit_factor,
                                    const rcf_dataset* paired, size_t samples, uint64_t seed,
                                    int threads, rcf_format format, rcf_report** out);

/* ---- selection experiment --------------------------------------------- */

rcf_status rcf_simconfig_default(rcf_simconfig** out);
rcf_status rcf_simconfig_zero_bias(rcf_simconfig** out);
/* "key: value" config text; see the toolkit README for the key list. */
rcf_status rcf_simconfig_load(const char* path, rcf_simconfig** out);
void rcf_simconfig_free(rcf_simconfig* config);
rcf_status rcf_simconfig_set_pool(rcf_simconfig* config, size_t pool_size);
rcf_status rcf_simconfig_set_slots(rcf_simconfig* config, size_t budget_slots);
rcf_status rcf_simconfig_set_trials(rcf_simconfig* config, size_t trials);

/* Repeated funding competitions under the policies in `policy_mask`
 * (RCF_POLICY_* bits). Deterministic in `seed`. */
rcf_status rcf_simulate_report(const rcf_simconfig* config, unsigned policy_mask,
                               uint64_t seed, rcf_format format, rcf_report** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RCF_H */
