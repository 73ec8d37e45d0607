#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "core/errors.hpp"
#include "core/forecast.hpp"
#include "core/refclass.hpp"

using namespace rcf;

namespace {

const std::string kData = RCF_DATA_DIR;

EmpiricalDistribution uk_rail() {
  return load_class_csv(kData + "/uk_rail_class.csv", InaccuracyKind::cost_overrun, 2)
      .distribution;
}

EmpiricalDistribution tram() {
  return load_class_csv(kData + "/tram_class.csv", InaccuracyKind::cost_overrun, 2)
      .distribution;
}

// Direct count of the guarantee the uplift is defined by.
double fraction_exceeding(const EmpiricalDistribution& d, double uplift) {
  std::size_t over = 0;
  for (const double v : d.values())
    if (v > uplift) ++over;
  return double(over) / double(d.size());
}

}  // namespace

TEST_CASE("rail anchor uplifts") {
  const auto d = uk_rail();
  CHECK(required_uplift(d, 0.5) == 40.0);
  CHECK(required_uplift(d, 0.1) == 68.0);
  CHECK(required_uplift(d, 0.2) == 62.0);
  CHECK(required_uplift(d, 1.0) == -5.0);  // sample minimum
}

TEST_CASE("risk domain is (0, 1]") {
  const auto d = uk_rail();
  CHECK_THROWS_AS(required_uplift(d, 0.0), DomainError);
  CHECK_THROWS_AS(required_uplift(d, -0.2), DomainError);
  CHECK_THROWS_AS(required_uplift(d, 1.0001), DomainError);
}

TEST_CASE("interpolated quantile alone would break the guarantee") {
  // n = 10, risk 0.35: the interpolated 0.65-quantile is 6.85, and 4 of 10
  // observations exceed it (0.4 > 0.35). The uplift must rise to the order
  // statistic 7, above which only 3 of 10 observations lie.
  const EmpiricalDistribution d({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(d.quantile(0.65) == doctest::Approx(6.85));
  CHECK(fraction_exceeding(d, d.quantile(0.65)) > 0.35);
  const double u = required_uplift(d, 0.35);
  CHECK(u == 7.0);
  CHECK(fraction_exceeding(d, u) <= 0.35);
}

TEST_CASE("uplift monotone in risk and guarantee holds on random samples") {
  std::mt19937_64 gen(31415);
  std::uniform_int_distribution<int> size_d(2, 40);
  std::uniform_real_distribution<double> val_d(-60.0, 250.0);
  std::uniform_real_distribution<double> risk_d(0.01, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(size_d(gen));
    for (auto& x : v) x = val_d(gen);
    const EmpiricalDistribution d(v);
    std::vector<double> risks(12);
    for (auto& r : risks) r = risk_d(gen);
    std::sort(risks.begin(), risks.end());
    double prev_uplift = -1e18;
    for (auto it = risks.rbegin(); it != risks.rend(); ++it) {  // descending risk
      const double u = required_uplift(d, *it);
      CHECK(u >= prev_uplift);
      prev_uplift = u;
      CHECK(fraction_exceeding(d, u) <= *it + 1e-15);
    }
  }
}

TEST_CASE("schedule is sorted by descending risk with non-decreasing uplift") {
  const auto d = uk_rail();
  const std::vector<double> grid = {0.1, 0.5, 0.2};
  const auto sched = uplift_schedule(d, grid, "uk-rail");
  REQUIRE(sched.points.size() == 3);
  CHECK(sched.points[0].acceptable_risk == 0.5);
  CHECK(sched.points[0].uplift_pct == 40.0);
  CHECK(sched.points[1].acceptable_risk == 0.2);
  CHECK(sched.points[1].uplift_pct == 62.0);
  CHECK(sched.points[2].acceptable_risk == 0.1);
  CHECK(sched.points[2].uplift_pct == 68.0);
  CHECK(sched.source == "uk-rail");

  const auto single = uplift_schedule(d, std::vector<double>{1.0}, "x");
  CHECK(single.points.at(0).uplift_pct == -5.0);

  CHECK_THROWS_AS(uplift_schedule(d, std::vector<double>{}, "x"), DomainError);
  CHECK_THROWS_AS(uplift_schedule(d, std::vector<double>{0.5, 0.0}, "x"), DomainError);
}

TEST_CASE("monetized rail anchors: 4000 at risks 0.5 and 0.1") {
  const auto d = uk_rail();
  const auto at50 = reference_class_forecast(4000.0, d, 0.5, 0.8, "uk-rail");
  CHECK(at50.adjusted_estimate - at50.base_estimate == doctest::Approx(1600.0).epsilon(1e-9));
  const auto at10 = reference_class_forecast(4000.0, d, 0.1, 0.8, "uk-rail");
  CHECK(at10.adjusted_estimate - at10.base_estimate == doctest::Approx(2720.0).epsilon(1e-9));
}

TEST_CASE("tram anchors: 320 to 400 and 357") {
  const auto d = tram();
  const auto conservative = reference_class_forecast(320.0, d, 0.2, 0.8, "tram");
  CHECK(conservative.uplift_pct == 25.0);
  CHECK(conservative.adjusted_estimate == doctest::Approx(400.0).epsilon(1e-9));
  const auto median_risk = reference_class_forecast(320.0, d, 0.5, 0.8, "tram");
  CHECK(median_risk.uplift_pct == doctest::Approx(11.5625).epsilon(1e-12));
  CHECK(median_risk.adjusted_estimate == doctest::Approx(357.0).epsilon(1e-9));
}

TEST_CASE("forecast interval is the central coverage band in money units") {
  const auto d = uk_rail();
  const auto f = reference_class_forecast(1000.0, d, 0.5, 0.8, "uk-rail");
  CHECK(f.interval.lo == doctest::Approx(1000.0 * (1.0 + d.quantile(0.1) / 100.0)));
  CHECK(f.interval.hi == doctest::Approx(1000.0 * (1.0 + d.quantile(0.9) / 100.0)));
  CHECK(f.interval.lo <= f.adjusted_estimate);
  CHECK(f.adjusted_estimate <= f.interval.hi);
  CHECK(f.class_median_pct == 40.0);
  CHECK(f.median_adjusted_estimate == doctest::Approx(1400.0));
  CHECK(f.class_size == 11);
}

TEST_CASE("forecast scales linearly in the base estimate") {
  const auto d = uk_rail();
  const auto f1 = reference_class_forecast(250.0, d, 0.3, 0.6, "x");
  const auto f3 = reference_class_forecast(750.0, d, 0.3, 0.6, "x");
  CHECK(f3.adjusted_estimate == doctest::Approx(3.0 * f1.adjusted_estimate).epsilon(1e-12));
  CHECK(f3.interval.lo == doctest::Approx(3.0 * f1.interval.lo).epsilon(1e-12));
  CHECK(f3.interval.hi == doctest::Approx(3.0 * f1.interval.hi).epsilon(1e-12));
}

TEST_CASE("forecast agrees with the schedule at the same risk") {
  const auto d = uk_rail();
  const auto sched = uplift_schedule(d, std::vector<double>{0.25}, "x");
  const auto f = reference_class_forecast(600.0, d, 0.25, 0.8, "x");
  CHECK(f.adjusted_estimate ==
        doctest::Approx(600.0 * (1.0 + sched.points[0].uplift_pct / 100.0)).epsilon(1e-12));
}

TEST_CASE("degenerate class leaves the estimate alone") {
  const EmpiricalDistribution d({0.0, 0.0, 0.0});
  const auto f = reference_class_forecast(100.0, d, 0.5, 0.8, "flat");
  CHECK(f.adjusted_estimate == 100.0);
  CHECK(f.interval.lo == 100.0);
  CHECK(f.interval.hi == 100.0);
}

TEST_CASE("negative uplift is allowed for underrunning classes") {
  const EmpiricalDistribution d({-30.0, -20.0, -10.0, -5.0});
  CHECK(required_uplift(d, 0.5) < 0.0);
}

TEST_CASE("forecast input validation") {
  const auto d = uk_rail();
  CHECK_THROWS_AS(reference_class_forecast(0.0, d, 0.5, 0.8, "x"), DomainError);
  CHECK_THROWS_AS(reference_class_forecast(-10.0, d, 0.5, 0.8, "x"), DomainError);
  CHECK_THROWS_AS(reference_class_forecast(100.0, d, 0.5, 0.0, "x"), DomainError);
  CHECK_THROWS_AS(reference_class_forecast(100.0, d, 0.5, 1.0, "x"), DomainError);
}
