#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core/records.hpp"
#include "core/types.hpp"

namespace rcf {

double mean_of(std::span<const double> v);
// Sample standard deviation, n-1 denominator. Requires n >= 2.
double sample_std_dev(std::span<const double> v);
double median_of(std::vector<double> v);  // by value: sorts a copy
// Median absolute deviation around `center`.
double mad_of(std::span<const double> v, double center);

// ---- descriptive summaries -------------------------------------------------

struct DatasetSummary {
  std::string group;  // "all", a type/region label, or "type/region"
  std::size_t n = 0;
  double mean = 0.0;
  double std_dev = 0.0;        // 0 when undefined (n == 1)
  bool std_dev_defined = true;
  double share_with_overrun = 0.0;    // fraction of observations > 0
  double band_halfwidth = 20.0;
  double share_outside_band = 0.0;    // fraction with |value| > band_halfwidth
};

enum class GroupBy { none, project_type, region, type_and_region };

// Summary of raw values under group label `group`. Requires n >= 1;
// n == 1 leaves std_dev 0 with std_dev_defined = false.
DatasetSummary summarize_values(std::span<const double> values, double band_halfwidth,
                                std::string group = "all");

// Grouped summaries over the records that carry the needed outturn fields.
// Groups without observations are omitted. Output is ordered by group label.
std::vector<DatasetSummary> summarize(std::span<const ProjectRecord> records,
                                      InaccuracyKind kind, GroupBy by,
                                      double band_halfwidth);

// ---- robust outlier screen -------------------------------------------------

// Indices split by robust z-score |x - median| / (1.4826 * MAD) > threshold.
// MAD == 0 marks every value different from the median as an outlier.
struct OutlierSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> excluded;
};
OutlierSplit robust_outliers(std::span<const double> values, double z_threshold = 3.0);

// ---- Student-t machinery ---------------------------------------------------

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction,
// |error| < 1e-10 over the parameter ranges t-tests produce.
double regularized_incomplete_beta(double a, double b, double x);
// P(T <= t) for Student-t with `df` degrees of freedom (df > 0, may be fractional).
double student_t_cdf(double t, double df);
// Two-sided p-value: P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

// ---- inferential tests -----------------------------------------------------

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject_at_5pct = false;
  std::map<std::string, double> metadata;  // df, means, slope, ...
};

// H0: population mean is zero. One-sample t, two-sided. n >= 2 and nonzero
// variance required ("degenerate sample" otherwise).
TestResult test_mean_nonzero(std::span<const double> values);

// H0: equal means. Welch two-sample t with Welch-Satterthwaite df.
// Both n >= 2. Zero pooled variance: equal means -> p = 1, else error.
TestResult test_group_difference(std::span<const double> a, std::span<const double> b);

struct YearValue {
  int year = 0;
  double value = 0.0;
};

// H0: no linear time trend. OLS of value on year; t-test of the slope with
// n-2 df. Needs n >= 3 and at least two distinct years ("no time variation").
// metadata carries slope (percent per year) and intercept.
TestResult test_time_trend(std::span<const YearValue> points);

}  // namespace rcf
