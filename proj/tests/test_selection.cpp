#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "core/errors.hpp"
#include "core/selection.hpp"
#include "core/simconfig.hpp"

using namespace rcf;

namespace {

const std::string kData = RCF_DATA_DIR;

PromoterProject honest(std::string id, double cost, double benefit) {
  PromoterProject p;
  p.id = std::move(id);
  p.type = ProjectType::rail;
  p.true_cost = cost;
  p.true_benefit = benefit;
  return p;
}

}  // namespace

TEST_CASE("stated figures follow the bias arithmetic") {
  PromoterProject p = honest("a", 100.0, 100.0);
  p.benefit_bias_pct = 60.0;
  CHECK(stated_cost(p) == 100.0);
  CHECK(stated_benefit(p) == doctest::Approx(160.0).epsilon(1e-14));
  CHECK(stated_appraisal(p) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(true_bcr(p) == 1.0);

  PromoterProject q = honest("b", 100.0, 100.0);
  q.understatement_pct = 20.0;
  CHECK(stated_cost(q) == doctest::Approx(80.0).epsilon(1e-14));
  CHECK(stated_appraisal(q) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("project validation") {
  CHECK_THROWS_AS(true_bcr(honest("x", 0.0, 10.0)), ValidationError);
  CHECK_THROWS_AS(true_bcr(honest("x", 10.0, 0.0)), ValidationError);
  PromoterProject p = honest("x", 10.0, 10.0);
  p.understatement_pct = 100.0;
  CHECK_THROWS_AS(stated_cost(p), ValidationError);
  PromoterProject q = honest("x", 10.0, 10.0);
  q.benefit_bias_pct = -100.0;
  CHECK_THROWS_AS(stated_benefit(q), ValidationError);
}

TEST_CASE("private capital rule is a threshold on the at-risk share") {
  PromoterProject p = honest("a", 10.0, 10.0);
  p.private_capital_share = 0.4;
  CHECK(meets_private_capital_rule(p));
  p.private_capital_share = 0.2;
  CHECK(!meets_private_capital_rule(p));
  CHECK(meets_private_capital_rule(p, 0.1));
}

TEST_CASE("rcf appraisal applies the type correction to both sides") {
  PromoterProject p = honest("a", 100.0, 100.0);
  p.understatement_pct = 20.0;  // stated cost 80
  p.benefit_bias_pct = 60.0;    // stated benefit 160
  SelectionPolicy pol;
  pol.rule = SelectionRule::rcf_adjusted_bcr;
  pol.budget_slots = 1;
  pol.corrections[ProjectType::rail] = {25.0, 100.0};
  // cost 80 * 1.25 = 100, benefit 160 / 2 = 80
  CHECK(policy_appraisal(p, pol) == doctest::Approx(0.8).epsilon(1e-14));

  // A type with no class gets no correction.
  p.type = ProjectType::ict;
  CHECK(policy_appraisal(p, pol) == doctest::Approx(stated_appraisal(p)).epsilon(1e-14));
}

TEST_CASE("naive funding rewards the lying promoter; the true ranking does not") {
  PromoterProject good = honest("good", 100.0, 150.0);  // true and stated BCR 1.5
  PromoterProject liar = honest("liar", 100.0, 100.0);  // true 1.0
  liar.benefit_bias_pct = 60.0;                         // stated 1.6
  const std::vector<PromoterProject> pool = {good, liar};

  SelectionPolicy naive{SelectionRule::naive_stated_bcr, 1, {}};
  const auto nr = select(pool, naive);
  REQUIRE(nr.funded.size() == 1);
  CHECK(nr.funded[0] == "liar");
  CHECK(nr.mean_realized_bcr_funded == 1.0);
  CHECK(nr.mean_realized_bcr_unfunded == 1.5);
  CHECK(nr.regret == doctest::Approx(0.5).epsilon(1e-14));

  SelectionPolicy truth{SelectionRule::true_bcr, 1, {}};
  const auto tr = select(pool, truth);
  CHECK(tr.funded[0] == "good");
  CHECK(tr.regret == 0.0);

  // A correction keyed on the liar's type restores the honest ranking: the
  // road project passes through untouched while the rail bias is deflated.
  PromoterProject good_road = good;
  good_road.type = ProjectType::road;
  const std::vector<PromoterProject> mixed = {good_road, liar};
  SelectionPolicy adj{SelectionRule::rcf_adjusted_bcr, 1, {}};
  adj.corrections[ProjectType::rail] = {0.0, 60.0};
  const auto ar = select(mixed, adj);
  CHECK(ar.funded[0] == "good");

  // Within a single type the correction is a common rescaling of the stated
  // appraisal and cannot reorder it; both pool members here are rail.
  const auto same_type = select(pool, adj);
  CHECK(same_type.funded[0] == "liar");
}

TEST_CASE("honest pools make the rules coincide") {
  const std::vector<PromoterProject> pool = {
      honest("a", 100.0, 120.0), honest("b", 200.0, 300.0), honest("c", 50.0, 45.0)};
  SelectionPolicy naive{SelectionRule::naive_stated_bcr, 2, {}};
  SelectionPolicy truth{SelectionRule::true_bcr, 2, {}};
  const auto nr = select(pool, naive);
  const auto tr = select(pool, truth);
  CHECK(nr.funded == tr.funded);
  CHECK(nr.funded == std::vector<std::string>{"b", "a"});
  CHECK(nr.regret == 0.0);
}

TEST_CASE("slot count above the pool funds everything") {
  const std::vector<PromoterProject> pool = {honest("a", 100.0, 120.0),
                                             honest("b", 100.0, 110.0)};
  SelectionPolicy pol{SelectionRule::naive_stated_bcr, 10, {}};
  const auto r = select(pool, pol);
  CHECK(r.funded.size() == 2);
  CHECK(std::isnan(r.mean_realized_bcr_unfunded));
  CHECK(r.mean_realized_bcr_funded == doctest::Approx(1.15).epsilon(1e-14));
}

TEST_CASE("ties break toward the smaller id") {
  const std::vector<PromoterProject> pool = {honest("b", 100.0, 120.0),
                                             honest("a", 100.0, 120.0)};
  SelectionPolicy pol{SelectionRule::naive_stated_bcr, 1, {}};
  CHECK(select(pool, pol).funded[0] == "a");
}

TEST_CASE("selection preconditions") {
  const std::vector<PromoterProject> pool = {honest("a", 100.0, 120.0)};
  SelectionPolicy pol{SelectionRule::naive_stated_bcr, 0, {}};
  CHECK_THROWS_AS(select(pool, pol), DomainError);
  SelectionPolicy ok{SelectionRule::naive_stated_bcr, 1, {}};
  CHECK_THROWS_AS(select(std::vector<PromoterProject>{}, ok), DomainError);
}

TEST_CASE("experiment preconditions") {
  auto cfg = ExperimentConfig::defaults();
  const std::vector<SelectionRule> none;
  CHECK_THROWS_AS(run_experiment(cfg, none, 1), DomainError);
  const std::vector<SelectionRule> pols = {SelectionRule::true_bcr};
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg, pols, 1), DomainError);
  cfg = ExperimentConfig::defaults();
  cfg.types.clear();
  CHECK_THROWS_AS(run_experiment(cfg, pols, 1), DomainError);
  cfg = ExperimentConfig::defaults();
  cfg.acceptable_risk = 0.0;
  CHECK_THROWS_AS(run_experiment(cfg, pols, 1), DomainError);
}

TEST_CASE("experiments are reproducible and thread-schedule independent") {
  auto cfg = ExperimentConfig::defaults();
  cfg.trials = 200;
  const std::vector<SelectionRule> pols = {SelectionRule::naive_stated_bcr,
                                           SelectionRule::rcf_adjusted_bcr,
                                           SelectionRule::true_bcr};
  const auto a = run_experiment(cfg, pols, 777);
  const auto b = run_experiment(cfg, pols, 777);
  REQUIRE(a.policies.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.policies[i].per_trial_funded == b.policies[i].per_trial_funded);
    CHECK(a.policies[i].mean_funded_bcr == b.policies[i].mean_funded_bcr);
    CHECK(a.policies[i].funded_ci.lo == b.policies[i].funded_ci.lo);
    CHECK(a.policies[i].funded_ci.hi == b.policies[i].funded_ci.hi);
  }
  CHECK(a.fraction_naive_below_rcf == b.fraction_naive_below_rcf);

  const auto c = run_experiment(cfg, pols, 778);
  CHECK(c.policies[0].mean_funded_bcr != a.policies[0].mean_funded_bcr);
}

TEST_CASE("clairvoyant ranking dominates every policy trial by trial") {
  auto cfg = ExperimentConfig::defaults();
  cfg.trials = 200;
  const std::vector<SelectionRule> pols = {SelectionRule::naive_stated_bcr,
                                           SelectionRule::rcf_adjusted_bcr,
                                           SelectionRule::true_bcr};
  const auto res = run_experiment(cfg, pols, 4321);
  const auto& naive = res.policies[0].per_trial_funded;
  const auto& adj = res.policies[1].per_trial_funded;
  const auto& truth = res.policies[2].per_trial_funded;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    CHECK(truth[t] >= adj[t]);
    CHECK(truth[t] >= naive[t]);
  }
  CHECK(res.policies[0].mean_regret >= 0.0);
  CHECK(res.policies[1].mean_regret >= 0.0);
  CHECK(res.policies[2].mean_regret == 0.0);
}

TEST_CASE("zero-bias control: policies coincide and corrections vanish") {
  auto cfg = ExperimentConfig::zero_bias();
  cfg.trials = 100;
  const std::vector<SelectionRule> pols = {SelectionRule::naive_stated_bcr,
                                           SelectionRule::rcf_adjusted_bcr,
                                           SelectionRule::true_bcr};
  const auto res = run_experiment(cfg, pols, 42424242);
  for (const auto& [type, corr] : res.derived_corrections) {
    CHECK(corr.uplift_pct == 0.0);
    CHECK(corr.benefit_overestimate_pct == 0.0);
  }
  CHECK(res.policies[0].per_trial_funded == res.policies[1].per_trial_funded);
  CHECK(res.policies[0].per_trial_funded == res.policies[2].per_trial_funded);
  CHECK(res.fraction_naive_below_rcf == 0.0);
}

TEST_CASE("default calibration: adjusted funding beats naive nearly always") {
  const auto cfg = ExperimentConfig::defaults();
  const std::vector<SelectionRule> pols = {SelectionRule::naive_stated_bcr,
                                           SelectionRule::rcf_adjusted_bcr,
                                           SelectionRule::true_bcr};
  const auto res = run_experiment(cfg, pols, 42424242);
  CHECK(res.policies[2].mean_funded_bcr >= res.policies[1].mean_funded_bcr);
  CHECK(res.policies[1].mean_funded_bcr > res.policies[0].mean_funded_bcr);
  CHECK(res.fraction_naive_below_rcf >= 0.95);

  // The derived corrections should sit near the calibration targets: rail
  // uplift near the 44.7 median overrun, road benefit overestimate near -8.7.
  const auto& rail = res.derived_corrections.at(ProjectType::rail);
  const auto& road = res.derived_corrections.at(ProjectType::road);
  CHECK(std::abs(rail.uplift_pct - 44.7) < 5.0);
  CHECK(std::abs(rail.benefit_overestimate_pct - 105.6) < 5.0);
  CHECK(std::abs(road.uplift_pct - 20.4) < 3.0);
  CHECK(std::abs(road.benefit_overestimate_pct + 8.68) < 3.0);
}

TEST_CASE("config files parse into the experiment shape") {
  const auto cfg = load_experiment_config(kData + "/sim_default.cfg");
  CHECK(cfg.pool_size == 64);
  CHECK(cfg.budget_slots == 16);
  CHECK(cfg.trials == 1000);
  CHECK(cfg.acceptable_risk == 0.5);
  REQUIRE(cfg.types.count(ProjectType::rail) == 1);
  REQUIRE(cfg.types.count(ProjectType::road) == 1);
  CHECK(cfg.types.at(ProjectType::rail).understatement_mean ==
        doctest::Approx(30.8915).epsilon(1e-12));
  CHECK(cfg.types.at(ProjectType::road).benefit_bias_mean ==
        doctest::Approx(-8.6758).epsilon(1e-12));

  const auto zero = load_experiment_config(kData + "/sim_zero_bias.cfg");
  for (const auto& [type, bias] : zero.types) {
    CHECK(bias.understatement_mean == 0.0);
    CHECK(bias.understatement_sd == 0.0);
    CHECK(bias.benefit_bias_mean == 0.0);
    CHECK(bias.benefit_bias_sd == 0.0);
  }
}

TEST_CASE("config parser rejects junk and round-trips the defaults") {
  std::istringstream bad_key("pool_size: 10\nwat: 3\n");
  CHECK_THROWS_AS(parse_experiment_config(bad_key), ParseError);
  std::istringstream bad_num("pool_size: banana\n");
  CHECK_THROWS_AS(parse_experiment_config(bad_num), ParseError);
  std::istringstream bad_type("type: zeppelin\n");
  CHECK_THROWS_AS(parse_experiment_config(bad_type), ParseError);
  std::istringstream no_colon("pool_size 10\n");
  CHECK_THROWS_AS(parse_experiment_config(no_colon), ParseError);

  // Declaring a type replaces the default type table instead of extending it.
  std::istringstream one_type("type: ict\nshare: 2\nunderstatement_mean: 5\n");
  const auto cfg = parse_experiment_config(one_type);
  CHECK(cfg.types.size() == 1);
  CHECK(cfg.types.at(ProjectType::ict).share == 2.0);
  CHECK(cfg.types.at(ProjectType::ict).understatement_mean == 5.0);

  const auto defaults = ExperimentConfig::defaults();
  std::istringstream round(experiment_config_text(defaults));
  const auto back = parse_experiment_config(round);
  CHECK(back.pool_size == defaults.pool_size);
  CHECK(back.budget_slots == defaults.budget_slots);
  CHECK(back.trials == defaults.trials);
  CHECK(back.cost_median == defaults.cost_median);
  REQUIRE(back.types.size() == defaults.types.size());
  for (const auto& [type, bias] : defaults.types) {
    CHECK(back.types.at(type).share == bias.share);
    CHECK(back.types.at(type).understatement_mean == bias.understatement_mean);
    CHECK(back.types.at(type).benefit_bias_sd == bias.benefit_bias_sd);
  }
}

TEST_CASE("rule names round trip") {
  for (auto r : {SelectionRule::naive_stated_bcr, SelectionRule::rcf_adjusted_bcr,
                 SelectionRule::true_bcr}) {
    auto parsed = selection_rule_from_string(to_string(r));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == r);
  }
  CHECK(selection_rule_from_string("naive") == SelectionRule::naive_stated_bcr);
  CHECK(selection_rule_from_string("rcf") == SelectionRule::rcf_adjusted_bcr);
  CHECK(selection_rule_from_string("true") == SelectionRule::true_bcr);
  CHECK(!selection_rule_from_string("greedy").has_value());
}
