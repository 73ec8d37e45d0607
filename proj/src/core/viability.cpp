#include "core/viability.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace rcf {

namespace {
constexpr double kQuantileGrid[] = {0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95};
constexpr double kIrrLo = -0.99;
constexpr double kIrrHi = 10.0;
constexpr double kIrrTol = 1e-9;
}  // namespace

void validate(const AppraisalInput& a) {
  if (!(a.forecast_cost > 0.0)) throw ValidationError("forecast_cost must be > 0");
  if (!(a.forecast_annual_benefit > 0.0))
    throw ValidationError("forecast_annual_benefit must be > 0");
  if (a.horizon_years < 1) throw ValidationError("horizon_years must be >= 1");
  if (!(a.discount_rate > -1.0)) throw ValidationError("discount_rate must be > -1");
}

double npv(std::span<const double> cashflows, double rate) {
  if (!(rate > -1.0)) throw DomainError("discount rate must be > -1");
  double acc = 0.0;
  double discount = 1.0;
  const double step = 1.0 / (1.0 + rate);
  for (double cf : cashflows) {
    acc += cf * discount;
    discount *= step;
  }
  return acc;
}

std::optional<double> irr(std::span<const double> cashflows) {
  if (cashflows.empty()) throw DomainError("irr of empty cash flow");
  double lo = kIrrLo, hi = kIrrHi;
  double flo = npv(cashflows, lo), fhi = npv(cashflows, hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;  // no sign change in bracket
  while (hi - lo > kIrrTol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = npv(cashflows, mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) { lo = mid; flo = fmid; }
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double forecast_bcr(const AppraisalInput& a) {
  validate(a);
  // PV of the constant benefit stream over years 1..horizon
  std::vector<double> flows(static_cast<std::size_t>(a.horizon_years) + 1, a.forecast_annual_benefit);
  flows[0] = 0.0;
  return npv(flows, a.discount_rate) / a.forecast_cost;
}

namespace {

struct SampleOutcome {
  double bcr = 0.0;
  double npv = 0.0;
  double irr = 0.0;
  bool irr_defined = false;
};

// One realized scenario: cost at t=0 scaled by the overrun, benefits scaled
// by the multiplier.
SampleOutcome evaluate_scenario(const AppraisalInput& a, double overrun_pct,
                                double benefit_factor) {
  if (!(benefit_factor > 0.0))
    throw DomainError("realized benefit factor must be > 0");
  const double realized_cost = a.forecast_cost * (1.0 + overrun_pct / 100.0);
  if (!(realized_cost > 0.0))
    throw DomainError("realized cost must stay > 0 (overrun <= -100 percent)");
  const double realized_benefit = a.forecast_annual_benefit * benefit_factor;

  std::vector<double> flows(static_cast<std::size_t>(a.horizon_years) + 1, realized_benefit);
  flows[0] = -realized_cost;
  SampleOutcome out;
  out.npv = npv(flows, a.discount_rate);
  out.bcr = (out.npv + realized_cost) / realized_cost;  // PV(benefits) / cost
  if (auto r = irr(flows)) {
    out.irr = *r;
    out.irr_defined = true;
  }
  return out;
}

double grid_quantile(std::vector<double>& sorted, double q) {
  // sorted must be ascending; type-7 interpolation, matching EmpiricalDistribution
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = (static_cast<double>(n) - 1.0) * q;
  const std::size_t i = static_cast<std::size_t>(h);
  if (i + 1 >= n) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

ViabilityReport aggregate(const AppraisalInput& a, std::vector<SampleOutcome> outcomes,
                          std::uint64_t seed) {
  ViabilityReport rep;
  rep.samples = outcomes.size();
  rep.seed = seed;
  rep.forecast_bcr = forecast_bcr(a);

  std::vector<double> bcrs(outcomes.size()), npvs(outcomes.size());
  std::vector<double> irrs;
  irrs.reserve(outcomes.size());
  std::size_t nonviable = 0;
  double bcr_sum = 0.0, npv_sum = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    bcrs[i] = outcomes[i].bcr;
    npvs[i] = outcomes[i].npv;
    bcr_sum += outcomes[i].bcr;
    npv_sum += outcomes[i].npv;
    if (outcomes[i].bcr < 1.0) ++nonviable;
    if (outcomes[i].irr_defined) irrs.push_back(outcomes[i].irr);
  }
  const double n = static_cast<double>(outcomes.size());
  rep.bcr_mean = bcr_sum / n;
  rep.npv_mean = npv_sum / n;
  rep.p_nonviable = static_cast<double>(nonviable) / n;

  std::sort(bcrs.begin(), bcrs.end());
  std::sort(npvs.begin(), npvs.end());
  for (double q : kQuantileGrid) {
    rep.bcr_quantiles[q] = grid_quantile(bcrs, q);
    rep.npv_quantiles[q] = grid_quantile(npvs, q);
  }
  // IRR aggregate: median across samples, undefined unless most samples have one
  if (irrs.size() * 2 >= outcomes.size() && !irrs.empty()) {
    std::sort(irrs.begin(), irrs.end());
    rep.irr_estimate = grid_quantile(irrs, 0.5);
  }
  return rep;
}

}  // namespace

ViabilityReport ex_post_evaluate(const AppraisalInput& a, double overrun_pct,
                                 double benefit_factor) {
  validate(a);
  std::vector<SampleOutcome> one{evaluate_scenario(a, overrun_pct, benefit_factor)};
  return aggregate(a, std::move(one), 0);
}

ViabilityReport monte_carlo_viability(const AppraisalInput& a, const RealizationModel& model,
                                      std::size_t samples, std::uint64_t seed,
                                      int threads) {
  validate(a);
  if (samples < 100) throw DomainError("Monte Carlo needs at least 100 samples");

  const auto* cost_dist = std::get_if<EmpiricalDistribution>(&model.cost_overrun_pct);
  const auto* benefit_dist = std::get_if<EmpiricalDistribution>(&model.benefit_source);
  if (model.dependence == Dependence::paired && model.pairs.empty())
    throw DomainError("paired dependence requires matched (overrun, traffic) pairs");
  if (benefit_dist) {
    // mapped multiplier must stay positive over the whole support
    if (benefit_dist->min() <= -100.0)
      throw DomainError("benefit inaccuracy distribution reaches -100 percent "
                        "(nonpositive multiplier)");
  }
  if (const auto* f = std::get_if<double>(&model.benefit_source); f && !(*f > 0.0))
    throw DomainError("constant benefit factor must be > 0");

  // Draw sample i strictly from stream (seed, i): scenario values never depend
  // on which thread computes them.
  auto scenario_at = [&](std::size_t i) {
    RngStream rng(seed, stream_id(rng_tag::monte_carlo, i));
    double overrun, factor;
    if (model.dependence == Dependence::paired) {
      const auto& pr = model.pairs[rng.next_below(model.pairs.size())];
      overrun = pr.first;
      factor = 1.0 + pr.second / 100.0;
    } else {
      if (cost_dist) {
        const auto& v = cost_dist->values();
        overrun = v[rng.next_below(v.size())];
      } else {
        overrun = std::get<double>(model.cost_overrun_pct);
      }
      if (benefit_dist) {
        const auto& v = benefit_dist->values();
        factor = 1.0 + v[rng.next_below(v.size())] / 100.0;
      } else {
        factor = std::get<double>(model.benefit_source);
      }
    }
    return evaluate_scenario(a, overrun, factor);
  };

  int nthreads = threads;
  if (nthreads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    nthreads = static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
  }
  nthreads = std::min<int>(nthreads, static_cast<int>(samples));

  std::vector<SampleOutcome> outcomes(samples);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < samples; ++i) outcomes[i] = scenario_at(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    std::exception_ptr first_error;
    std::mutex err_mu;
    const std::size_t chunk = (samples + static_cast<std::size_t>(nthreads) - 1) /
                              static_cast<std::size_t>(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      const std::size_t lo = static_cast<std::size_t>(t) * chunk;
      const std::size_t hi = std::min(samples, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) outcomes[i] = scenario_at(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  return aggregate(a, std::move(outcomes), seed);
}

}  // namespace rcf
