#include "doctest.h"

#include "causid/scm.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace causid;

namespace {
// Always the counterfactual form, even without subscripts.
Conjunction conj(const std::string& q, const Admg& g) {
  auto r = parse_query(q, g.nodes());
  if (r.counterfactual) return r.gamma;
  Conjunction c;
  for (const auto& a : r.outcome) c.push_back({a.var, a.value, {}});
  return c;
}
}  // namespace

TEST_CASE("teacher models: joints and interventions") {
  auto m1 = support::model("m1"), m2 = support::model("m2");
  auto j1 = joint(m1), j2 = joint(m2);
  CHECK(j1.prob({{"Y", "1"}, {"A", "1"}}) == doctest::Approx(0.079).epsilon(1e-12));
  CHECK(j1.prob({{"Y", "0"}, {"A", "0"}}) == doctest::Approx(0.421).epsilon(1e-12));
  CHECK(j2.prob({{"Y", "1"}, {"A", "1"}}) == doctest::Approx(0.07975).epsilon(1e-12));
  CHECK(std::fabs(intervene(m1, {{"A", "0"}}).prob({{"Y", "1"}}) - 0.135) < 1e-12);
  CHECK(std::fabs(intervene(m2, {{"A", "0"}}).prob({{"Y", "1"}}) - 0.125) < 1e-12);
  // observationally close, interventionally apart
  for (const auto& a : {"0", "1"})
    for (const auto& y : {"0", "1"}) CHECK(std::fabs(j1.prob({{"A", a}, {"Y", y}}) - j2.prob({{"A", a}, {"Y", y}})) <= 1e-3);
}

TEST_CASE("U treated as observed recovers the interventional value") {
  auto m1 = support::model("m1");
  auto full = joint_with_exogenous(m1);
  auto e = parse_estimand("sum_{u} P(y|a0,u) P(u)", {"A", "Y", "U"});
  CHECK(std::fabs(eval_estimand(e, full, {{"y", "1"}, {"a0", "0"}}) - 0.135) < 1e-12);
}

TEST_CASE("effect measures on M1") {
  auto m1 = support::model("m1");
  EffectParams p{"A", "Y", "1", "0", "1", {}};
  auto j = joint(m1);
  CHECK(j.prob({{"Y", "1"}, {"A", "1"}}) / j.prob({{"A", "1"}}) == doctest::Approx(0.158));
  CHECK(std::fabs(effect_measure(m1, EffectKind::TV, p)) < 1e-12);
  CHECK(std::fabs(effect_measure(m1, EffectKind::TE, p)) < 1e-12);
  // no mediators
  CHECK(std::fabs(effect_measure(m1, EffectKind::NIE, p)) < 1e-12);
}

TEST_CASE("intervene equals truncated factorisation") {
  for (const char* name : {"g6", "g10", "g12", "g17", "g18", "g27"}) {
    auto g = support::graph(name);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto m = random_scm_mixed(g, seed, 3);
      auto d = intervene(m, {{"A", "1"}});
      for (const auto& y : m.variable("Y").domain) {
        CAPTURE(name);
        CHECK(std::fabs(d.prob({{"Y", y}}) - oracle::interventional(m, {{"A", "1"}}, {{"Y", y}})) < 1e-12);
      }
    }
  }
}

TEST_CASE("counterfactual oracle: consistency and contradictions") {
  auto g = support::graph("g17");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto m = random_scm(g, seed);
    auto j = joint(m);
    // empty subscripts reduce to conditioning
    double c = ctf_probability(m, conj("P(Y=1, M1=0)", g), conj("P(A=1)", g));
    CHECK(std::fabs(c - j.prob({{"Y", "1"}, {"M1", "0"}, {"A", "1"}}) / j.prob({{"A", "1"}})) < 1e-12);
    // Y_a given a is P(y|a)
    double y_a = ctf_probability(m, conj("P(Y[A=1]=1)", g), conj("P(A=1)", g));
    CHECK(std::fabs(y_a - j.prob({{"Y", "1"}, {"A", "1"}}) / j.prob({{"A", "1"}})) < 1e-12);
    CHECK(ctf_probability(m, conj("P(Y[A=1]=1, Y[A=1]=0)", g)) == 0.0);
  }
  // identifiable cross-world quantity; the two enumerations couple rows differently
  auto g6 = support::graph("g6");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto m = random_scm_mixed(g6, seed, 3);
    auto q = conj("P(Y[A=1]=1, A=0)", g6);
    CHECK(std::fabs(ctf_probability(m, q) - oracle::ctf(m, q)) < 1e-12);
  }
}

TEST_CASE("ZeroEvidence and DomainTooLarge") {
  auto g = support::graph("g31");
  auto m = support::model("g31_w1");
  try {
    ctf_probability(m, conj("P(Y=1)", g), conj("P(A=0, Y[A=1]=1, A=1)", g));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroEvidence);
  }
  auto big = random_scm(support::graph("g27"), 3, 4);
  try {
    joint(big, 100);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainTooLarge);
  }
}

TEST_CASE("random models") {
  auto g20 = support::graph("g20");
  CHECK(model_to_json(random_scm(g20, 9)) == model_to_json(random_scm(g20, 9)));
  CHECK(model_to_json(random_scm(g20, 9)) != model_to_json(random_scm(g20, 10)));
  auto m = random_scm(g20, 9);
  REQUIRE(m.exogenous.size() == 1);
  int fed = 0;
  for (const auto& [v, t] : m.tables)
    for (const auto& p : t.parents) fed += p == m.exogenous[0].name;
  CHECK(fed == 2);
  CHECK(random_scm(support::graph("g6"), 1).exogenous.empty());
  for (const auto& [v, t] : m.tables)
    for (const auto& [k, row] : t.rows)
      for (double x : row) CHECK(x >= 0.01);
}

TEST_CASE("model json round-trip and validation") {
  auto m = support::model("m1");
  auto again = model_from_json(model_to_json(m));
  CHECK(model_to_json(again) == model_to_json(m));
  auto bad = nlohmann::json::parse(model_to_json(m));
  bad["tables"]["Y"]["rows"].begin().value()[0] = 0.9;
  try {
    model_from_json(bad.dump());
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidModel);
  }
  auto orphan = nlohmann::json::parse(model_to_json(m));
  orphan["edges"]["bidirected"] = nlohmann::json::array();
  CHECK_THROWS_AS(model_from_json(orphan.dump()), Error);
}

TEST_CASE("pse_value special cases") {
  auto g = support::graph("g2");
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto m = random_scm(g, seed);
    auto all = proper_causal_paths(g, "A", "Y");
    double te1 = intervene(m, {{"A", "1"}}).prob({{"Y", "1"}});
    CHECK(std::fabs(pse_value(m, "A", "Y", all, "1", "0", "1") - te1) < 1e-12);
    double direct = pse_value(m, "A", "Y", {{"A", "Y"}}, "1", "0", "1");
    CHECK(std::fabs(direct - oracle::pse(m, "A", "Y", {{"A", "Y"}}, "1", "0", "1")) < 1e-12);
  }
  auto chain = support::graph("g1");
  auto m = random_scm(chain, 4);
  CHECK(std::fabs(pse_value(m, "A", "Y", {{"A", "Y"}}, "1", "0", "1") -
                  intervene(m, {{"A", "1"}}).prob({{"Y", "1"}})) < 1e-12);
}
