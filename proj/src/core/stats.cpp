#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace rcf {

double mean_of(std::span<const double> v) {
  if (v.empty()) throw DomainError("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std_dev(std::span<const double> v) {
  if (v.size() < 2) throw DomainError("sample standard deviation needs n >= 2");
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw DomainError("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mad_of(std::span<const double> v, double center) {
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::fabs(v[i] - center);
  return median_of(std::move(dev));
}

DatasetSummary summarize_values(std::span<const double> values, double band_halfwidth,
                                std::string group) {
  if (values.empty()) throw DomainError("summary of empty group");
  DatasetSummary s;
  s.group = std::move(group);
  s.n = values.size();
  s.mean = mean_of(values);
  if (values.size() >= 2) {
    s.std_dev = sample_std_dev(values);
  } else {
    s.std_dev = 0.0;
    s.std_dev_defined = false;
  }
  s.band_halfwidth = band_halfwidth;
  std::size_t pos = 0, outside = 0;
  for (double x : values) {
    if (x > 0.0) ++pos;
    if (std::fabs(x) > band_halfwidth) ++outside;
  }
  s.share_with_overrun = static_cast<double>(pos) / static_cast<double>(s.n);
  s.share_outside_band = static_cast<double>(outside) / static_cast<double>(s.n);
  return s;
}

std::vector<DatasetSummary> summarize(std::span<const ProjectRecord> records,
                                      InaccuracyKind kind, GroupBy by,
                                      double band_halfwidth) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : records) {
    double value;
    if (kind == InaccuracyKind::cost_overrun) {
      if (!r.actual_cost) continue;
      value = cost_overrun(r);
    } else {
      if (!r.estimated_traffic || !r.actual_traffic) continue;
      value = traffic_inaccuracy(r);
    }
    std::string key;
    switch (by) {
      case GroupBy::none: key = "all"; break;
      case GroupBy::project_type: key = to_string(r.type); break;
      case GroupBy::region: key = to_string(r.region); break;
      case GroupBy::type_and_region:
        key = std::string(to_string(r.type)) + "/" + std::string(to_string(r.region));
        break;
    }
    groups[key].push_back(value);
  }
  std::vector<DatasetSummary> out;
  out.reserve(groups.size());
  for (auto& [key, values] : groups)
    out.push_back(summarize_values(values, band_halfwidth, key));
  return out;
}

OutlierSplit robust_outliers(std::span<const double> values, double z_threshold) {
  if (values.empty()) throw DomainError("outlier screen of empty sample");
  const double med = median_of({values.begin(), values.end()});
  const double mad = mad_of(values, med);
  const double scale = 1.4826 * mad;
  OutlierSplit split;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double dev = std::fabs(values[i] - med);
    const bool out = scale > 0.0 ? dev / scale > z_threshold : dev > 0.0;
    (out ? split.excluded : split.kept).push_back(i);
  }
  return split;
}

// ---- Student-t machinery ---------------------------------------------------

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // Symmetry keeps the continued fraction in its fast-converging region.
  if (x > (a + 1.0) / (a + b + 2.0))
    return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);

  // Lentz's algorithm for the standard continued fraction expansion.
  constexpr double tiny = 1e-300;
  double f = 1.0, c = 1.0, d = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const int m = i / 2;
    double numerator;
    if (i == 0)
      numerator = 1.0;
    else if (i % 2 == 0)
      numerator = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    else
      numerator = -((a + m) * (a + b + m) * x) / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));

    d = 1.0 + numerator * d;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = 1.0 + numerator / c;
    if (std::fabs(c) < tiny) c = tiny;
    const double cd = c * d;
    f *= cd;
    if (std::fabs(1.0 - cd) < 1e-15) break;
  }
  return std::exp(ln_front) * (f - 1.0) / a;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw DomainError("t distribution needs df > 0");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);  // P(T >= |t|)
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw DomainError("t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

// ---- inferential tests -----------------------------------------------------

TestResult test_mean_nonzero(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("mean test needs n >= 2");
  const double n = static_cast<double>(values.size());
  const double m = mean_of(values);
  const double sd = sample_std_dev(values);
  TestResult r;
  r.test_name = "mean_nonzero";
  r.metadata["n"] = n;
  r.metadata["mean"] = m;
  r.metadata["df"] = n - 1.0;
  if (sd == 0.0) {
    if (m == 0.0) {  // all zeros: consistent with H0
      r.statistic = 0.0;
      r.p_value = 1.0;
      return r;
    }
    throw DomainError("degenerate sample: zero variance with nonzero mean");
  }
  r.statistic = m / (sd / std::sqrt(n));
  r.p_value = student_t_two_sided_p(r.statistic, n - 1.0);
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

TestResult test_group_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("group difference test needs n >= 2 per group");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double sda = sample_std_dev(a), sdb = sample_std_dev(b);
  const double va = sda * sda / na, vb = sdb * sdb / nb;

  TestResult r;
  r.test_name = "group_difference";
  r.metadata["n_a"] = na;
  r.metadata["n_b"] = nb;
  r.metadata["mean_a"] = ma;
  r.metadata["mean_b"] = mb;

  const double denom = va + vb;
  if (denom == 0.0) {
    if (ma == mb) {  // identical constant groups
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.metadata["df"] = na + nb - 2.0;
      return r;
    }
    throw DomainError("degenerate sample: zero variance in both groups");
  }
  // Welch-Satterthwaite degrees of freedom
  const double df = denom * denom /
                    (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  r.statistic = (ma - mb) / std::sqrt(denom);
  r.p_value = student_t_two_sided_p(r.statistic, df);
  r.reject_at_5pct = r.p_value < 0.05;
  r.metadata["df"] = df;
  return r;
}

TestResult test_time_trend(std::span<const YearValue> points) {
  if (points.size() < 3) throw DomainError("time trend test needs n >= 3");
  const double n = static_cast<double>(points.size());
  double xbar = 0.0, ybar = 0.0;
  for (const auto& p : points) { xbar += p.year; ybar += p.value; }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = p.year - xbar;
    sxx += dx * dx;
    sxy += dx * (p.value - ybar);
  }
  if (sxx == 0.0) throw DomainError("no time variation: all observations share one year");

  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double sse = 0.0;
  for (const auto& p : points) {
    const double resid = p.value - intercept - slope * p.year;
    sse += resid * resid;
  }
  const double df = n - 2.0;
  const double se2 = sse / df / sxx;

  TestResult r;
  r.test_name = "time_trend";
  r.metadata["n"] = n;
  r.metadata["slope"] = slope;
  r.metadata["intercept"] = intercept;
  r.metadata["df"] = df;
  if (se2 == 0.0) {  // perfect linear fit
    r.statistic = slope == 0.0 ? 0.0
                               : std::copysign(std::numeric_limits<double>::infinity(), slope);
    r.p_value = slope == 0.0 ? 1.0 : 0.0;
  } else {
    r.statistic = slope / std::sqrt(se2);
    r.p_value = student_t_two_sided_p(r.statistic, df);
  }
  r.reject_at_5pct = r.p_value < 0.05;
  return r;
}

}  // namespace rcf
