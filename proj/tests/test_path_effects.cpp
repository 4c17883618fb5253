#include "doctest.h"

#include "causid/path_effects.hpp"
#include "checks.hpp"

using namespace causid;

namespace {

std::vector<Path> paths_of(const nlohmann::json& c) {
  std::vector<Path> out;
  for (const auto& p : c.at("paths")) out.push_back(parse_path(p));
  return out;
}

PathSet pi_of(const Admg& g, const nlohmann::json& c) { return make_path_set(g, "A", "Y", paths_of(c)); }

std::set<Edge> active_of(const PathSet& pi) { return pi.active; }

double effect_error(const Admg& g, const Estimand& e, EffectKind kind) {
  return checks::max_error(g, {{"a1", "A"}, {"a0", "A"}}, checks::value_of(e),
                           [&](const DiscreteScm& m, const support::Env& env) {
                             return effect_measure(m, kind, {"A", "Y", env.at("a1"), env.at("a0"), "", {}});
                           });
}

// E[Y_{a1, M_{a0}}] - E[Y_{a0}] from the reference enumeration
double nde_reference(const DiscreteScm& m, const Admg& g, const std::string& a1, const std::string& a0) {
  CtfAtom y{"Y", "", {{"A", a1, nullptr}}};
  for (const auto& v : mediators(g, "A", "Y")) {
    auto med = std::make_shared<CtfAtom>(CtfAtom{v, "", {{"A", a0, nullptr}}});
    y.subscript.push_back({v, "", med});
  }
  return oracle::mean(m, y) - oracle::mean(m, CtfAtom{"Y", "", {{"A", a0, nullptr}}});
}

}  // namespace

TEST_CASE("mediators") {
  CHECK(mediators(support::graph("g36"), "A", "Y") == NodeSet{"M1", "M2"});
  CHECK(mediators(support::graph("g6"), "A", "Y").empty());
}

TEST_CASE("path sets are validated") {
  auto g = support::graph("g2");
  auto pi = make_path_set(g, "A", "Y", {{"A", "M", "Y"}, {"A", "M", "Y"}});
  CHECK(pi.paths.size() == 1);
  CHECK(pi.active == std::set<Edge>{{"A", "M"}, {"M", "Y"}});
  CHECK_THROWS_AS(make_path_set(g, "A", "Y", {{"A", "Y", "M"}}), Error);
  CHECK_THROWS_AS(make_path_set(g, "A", "Y", {}), Error);
}

TEST_CASE("natural effects: printed formulas, engine, oracle") {
  for (const auto& c : support::cases().at("mediation")) {
    std::string name = c.at("graph");
    CAPTURE(name);
    auto g = support::graph(name);
    auto nde = nde_estimand(g, "A", "Y", "a1", "a0");
    auto nie = nie_estimand(g, "A", "Y", "a1", "a0");
    REQUIRE(nde.identifiable());
    REQUIRE(nie.identifiable());
    CHECK(effect_error(g, *nde.estimand, EffectKind::NDE) < 1e-9);
    CHECK(effect_error(g, *nie.estimand, EffectKind::NIE) < 1e-9);
    CHECK(checks::max_error(
              g, {{"a1", "A"}, {"a0", "A"}}, checks::value_of(*nde.estimand),
              [&](const DiscreteScm& m, const support::Env& env) {
                return nde_reference(m, g, env.at("a1"), env.at("a0"));
              },
              5, 2) < 1e-9);
    for (const char* k : {"nde", "nie"}) {
      if (!c.contains(k)) continue;
      auto printed = parse_estimand(c.at(k).get<std::string>(), g.nodes());
      CHECK(effect_error(g, printed, std::string(k) == "nde" ? EffectKind::NDE : EffectKind::NIE) < 1e-9);
    }
  }
}

TEST_CASE("total effect decomposes") {
  for (const char* name : {"g35", "g36", "g37", "semi_nde"}) {
    CAPTURE(name);
    auto g = support::graph(name);
    auto nde = *nde_estimand(g, "A", "Y", "a1", "a0").estimand;
    auto nie_rev = *nie_estimand(g, "A", "Y", "a0", "a1").estimand;
    auto te = [&](const DiscreteScm& m, const support::Env& env) {
      return effect_measure(m, EffectKind::TE, {"A", "Y", env.at("a1"), env.at("a0"), "1", {}});
    };
    // binary outcomes: E[Y] is P(Y=1)
    CHECK(checks::max_error(
              g, {{"a1", "A"}, {"a0", "A"}},
              [&](const DiscreteScm& m, const support::Env& env) {
                return support::eval(nde, m, env) - support::eval(nie_rev, m, env);
              },
              te, checks::kModels, 2) < 1e-9);
  }
}

TEST_CASE("natural effects fail with a confounded mediator") {
  auto r = nde_estimand(support::graph("g13"), "A", "Y", "a1", "a0");
  CHECK_FALSE(r.identifiable());
  auto g6 = support::graph("g6");
  CHECK(nie_estimand(g6, "A", "Y", "a1", "a0").estimand->is_constant(0.0));
  CHECK_THROWS_AS(nde_estimand(g6, "A", "Y", "a1", "a1"), Error);
  try {
    nde_estimand(g6, "A", "Y", "a1", "a0", NodeSet{});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadAdjustmentSet);
  }
}

TEST_CASE("recanting witness and districts") {
  auto kite = support::graph("kite");
  auto w = recanting_witness(kite, pi_of(kite, support::case_of("pse", "kite")));
  REQUIRE(w);
  CHECK(w->nodes == NodeSet{"R"});
  CHECK_FALSE(pse_term_estimand(kite, pi_of(kite, support::case_of("pse", "kite")), "a1", "a0").identifiable());
  CHECK_THROWS_AS(recanting_witness(support::graph("fig6a"), pi_of(support::graph("fig6a"), support::case_of("pse", "fig6a"))),
                  Error);
  for (const char* name : {"fig6a", "fig6b"}) {
    CAPTURE(name);
    auto g = support::graph(name);
    const auto& c = support::case_of("pse", name);
    auto d = recanting_district(g, pi_of(g, c));
    REQUIRE(d);
    CHECK(d->kind == PseWitness::Kind::RecantingDistrict);
    CHECK(d->nodes == c.at("witness").get<NodeSet>());
    auto r = pse_term_estimand(g, pi_of(g, c), "a1", "a0");
    REQUIRE_FALSE(r.identifiable());
    CHECK(render_witness(*r.witness).find("recanting district") == 0);
  }
  auto g38 = support::graph("g38");
  CHECK_FALSE(recanting_witness(g38, pi_of(g38, support::case_of("pse", "g38"))));
}

TEST_CASE("witness models for recanting patterns") {
  for (const auto& [name, models] :
       std::vector<std::pair<std::string, std::pair<std::string, std::string>>>{{"kite", {"kite_w1", "kite_w2"}},
                                                                                {"fig6b", {"fig6b_w1", "fig6b_w2"}}}) {
    CAPTURE(name);
    auto g = support::graph(name);
    auto m1 = support::model(models.first), m2 = support::model(models.second);
    auto j1 = joint(m1), j2 = joint(m2);
    for (size_t i = 0; i < j1.probabilities().size(); ++i)
      CHECK(std::fabs(j1.probabilities()[i] - j2.probabilities()[i]) < 1e-12);
    auto paths = paths_of(support::case_of("pse", name));
    double v1 = pse_value(m1, "A", "Y", paths, "1", "0", "1"), v2 = pse_value(m2, "A", "Y", paths, "1", "0", "1");
    CHECK(std::fabs(v1 - v2) >= 0.5);
    auto act = active_of(make_path_set(g, "A", "Y", paths));
    CHECK(std::fabs(v1 - oracle::pse(m1, "A", "Y", act, "1", "0", "1")) < 1e-12);
    CHECK(std::fabs(v2 - oracle::pse(m2, "A", "Y", act, "1", "0", "1")) < 1e-12);
  }
}

TEST_CASE("identifiable path-specific terms match the oracle") {
  for (const char* name : {"g38", "g39", "g40", "g41", "g42", "g43"}) {
    CAPTURE(name);
    auto g = support::graph(name);
    const auto& c = support::case_of("pse", name);
    auto pi = pi_of(g, c);
    auto r = pse_term_estimand(g, pi, "a1", "a0");
    REQUIRE(r.identifiable());
    auto syms = checks::contrast_symbols();
    CHECK(checks::max_error(g, syms, checks::value_of(*r.estimand), [&](const DiscreteScm& m, const support::Env& env) {
            return pse_value(m, "A", "Y", pi.paths, env.at("a1"), env.at("a0"), env.at("y"));
          }) < 1e-9);
    CHECK(checks::max_error(
              g, syms, checks::value_of(*r.estimand),
              [&](const DiscreteScm& m, const support::Env& env) {
                return oracle::pse(m, "A", "Y", pi.active, env.at("a1"), env.at("a0"), env.at("y"));
              }) < 1e-9);
  }
}

TEST_CASE("printed path-specific formulas") {
  for (const char* name : {"g38", "g39", "g40"}) {
    CAPTURE(name);
    auto g = support::graph(name);
    const auto& c = support::case_of("pse", name);
    auto pi = pi_of(g, c);
    auto printed = parse_estimand(c.at("printed").get<std::string>(), g.nodes());
    CHECK(checks::max_error(g, checks::contrast_symbols(), checks::value_of(printed),
                            [&](const DiscreteScm& m, const support::Env& env) {
                              return pse_value(m, "A", "Y", pi.paths, env.at("a1"), env.at("a0"), env.at("y"));
                            }) < 1e-9);
  }
}

TEST_CASE("all paths give the total effect term") {
  for (const char* name : {"g2", "g36", "g17"}) {
    CAPTURE(name);
    auto g = support::graph(name);
    auto pi = make_path_set(g, "A", "Y", proper_causal_paths(g, "A", "Y"));
    auto r = pse_term_estimand(g, pi, "a1", "a0");
    REQUIRE(r.identifiable());
    CHECK(checks::max_error(g, checks::contrast_symbols(), checks::value_of(*r.estimand),
                            [](const DiscreteScm& m, const support::Env& env) {
                              return oracle::interventional(m, {{"A", env.at("a1")}}, {{"Y", env.at("y")}});
                            }) < 1e-9);
    auto full = pse_estimand(g, pi, "a1", "a0");
    REQUIRE(full.identifiable());
    CHECK(checks::max_error(g, {{"a1", "A"}, {"a0", "A"}, {"y", "Y"}}, checks::value_of(*full.estimand),
                            [](const DiscreteScm& m, const support::Env& env) {
                              return effect_measure(m, EffectKind::TE, {"A", "Y", env.at("a1"), env.at("a0"), env.at("y"), {}});
                            }) < 1e-9);
  }
}
