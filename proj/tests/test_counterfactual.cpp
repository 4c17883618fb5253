#include "doctest.h"

#include "causid/counterfactual.hpp"
#include "checks.hpp"

using namespace causid;

namespace {

struct Ctf {
  Admg g;
  Query q;
};

Ctf load(const std::string& name, const std::string& query) {
  auto g = support::graph(name);
  return {g, parse_query(query, g.nodes())};
}

IdentResult run(const Ctf& c) {
  return c.q.delta.empty() ? identify_ctf(c.g, c.q.gamma) : identify_ctf_conditional(c.g, c.q.gamma, c.q.delta);
}

// estimand vs the library on all models, and vs the slower reference on a few
// binary ones; every binding of the listed symbols
double ctf_error(const Ctf& c, const Estimand& e, const std::vector<std::pair<std::string, std::string>>& syms) {
  auto lib = checks::max_error(c.g, syms, checks::value_of(e), [&](const DiscreteScm& m, const support::Env& env) {
    return ctf_probability(m, bind_values(c.q.gamma, env), bind_values(c.q.delta, env));
  });
  auto ref = checks::max_error(c.g, syms, checks::value_of(e), [&](const DiscreteScm& m, const support::Env& env) {
    return oracle::ctf(m, bind_values(c.q.gamma, env), bind_values(c.q.delta, env));
  }, 5, 2);
  return std::max(lib, ref);
}

}  // namespace

TEST_CASE("query parsing") {
  auto c = load("g31", "P(Y[A=a1]=y | A=a0)");
  CHECK(c.q.counterfactual);
  REQUIRE(c.q.gamma.size() == 1);
  CHECK(render_ctf(c.q.gamma) == "Y[A=a1]=y");
  CHECK(render_ctf(c.q.delta) == "A=a0");
  auto n = load("g35", "P(Y[A=a1, M[A=a0]]=y)");
  REQUIRE(n.q.gamma[0].subscript.size() == 2);
  CHECK(n.q.gamma[0].subscript[1].nested);
  auto causal = load("g6", "P(Y|do(A))");
  CHECK_FALSE(causal.q.counterfactual);
  CHECK(causal.q.doset.size() == 1);
  CHECK_THROWS_AS(load("g6", "P(Y[A=a1]=y"), ParseError);
}

TEST_CASE("parallel worlds graph for two worlds of one variable") {
  auto c = load("fig3a", "P(Y[A=a']=y, Y[A=a]=y')");
  auto cg = make_cg(c.g, c.q.gamma);
  CHECK_FALSE(cg.inconsistent);
  // the actual world is not needed; two intervened A copies and two Y copies
  CHECK(cg.wg.restricted.nodes().size() == 4);
  CHECK(cg.wg.restricted.bidirected().size() == 1);
  auto r = run(c);
  CHECK_FALSE(r.identifiable());
  CHECK(std::holds_alternative<CtfWitness>(*r.witness));
}

TEST_CASE("merged copies share nodes") {
  auto c = load("fig3c", "P(Y[X=x]=y, W1=w1, W2=w2, Z[X=x']=z)");
  auto cg = make_cg(c.g, c.q.gamma);
  // W1 and W2 have no parents, so their copies collapse into one node each
  CHECK(cg.wg.merged.at(copy_name("W1", {{"X", "x"}})) == cg.wg.merged.at("W1"));
  CHECK(cg.wg.merged.at(copy_name("W2", {{"X", "x'"}})) == cg.wg.merged.at("W2"));
  auto r = run(c);
  CHECK_FALSE(r.identifiable());
}

TEST_CASE("inconsistent events give zero") {
  auto c = load("g6", "P(Y[A=a1]=y, Y[A=a1]=y')");
  auto r = identify_ctf(c.g, bind_values(c.q.gamma, {{"y", "1"}, {"y'", "0"}}));
  REQUIRE(r.identifiable());
  CHECK(r.estimand->is_constant(0.0));
  auto same = identify_ctf(c.g, bind_values(load("g6", "P(A[A=a]=a)").q.gamma, {{"a", "1"}}));
  REQUIRE(same.identifiable());
  CHECK(same.estimand->is_constant(1.0));
}

TEST_CASE("effect of treatment on the treated") {
  auto g31 = load("g31", "P(Y[A=a1]=y | A=a0)");
  auto r = run(g31);
  CHECK_FALSE(r.identifiable());

  auto g32 = load("g32", "P(Y[A=a1]=y | A=a0)");
  auto r32 = run(g32);
  REQUIRE(r32.identifiable());
  CHECK(render(*r32.estimand, Format::Text, &g32.g.nodes()) ==
        support::case_of("counterfactual", "g32").at("rendered").get<std::string>());
  CHECK(ctf_error(g32, *r32.estimand, checks::contrast_symbols()) < 1e-9);

  for (const char* name : {"g33", "g34"}) {
    CAPTURE(name);
    auto c = load(name, support::case_of("counterfactual", name).at("query"));
    auto res = run(c);
    REQUIRE(res.identifiable());
    auto syms = checks::contrast_symbols();
    if (std::string(name) == "g34") syms.push_back({"w", "W"});
    CHECK(ctf_error(c, *res.estimand, syms) < 1e-9);
  }
}

TEST_CASE("printed G34 formula with an implicit sum over m'") {
  auto c = load("g34", "P(Y[A=a1]=y, W=w | A=a0)");
  auto printed = parse_estimand(support::case_of("counterfactual", "g34").at("printed"), c.g.nodes());
  auto syms = checks::contrast_symbols();
  syms.push_back({"w", "W"});
  CHECK(ctf_error(c, printed, syms) < 1e-9);
}

TEST_CASE("non-identifiability witnesses for the bow graph") {
  auto w1 = support::model("g31_w1"), w2 = support::model("g31_w2");
  auto j1 = joint(w1), j2 = joint(w2);
  for (size_t i = 0; i < j1.probabilities().size(); ++i)
    CHECK(std::fabs(j1.probabilities()[i] - j2.probabilities()[i]) < 1e-9);
  auto c = load("g31", "P(Y[A=a1]=y | A=a0)");
  support::Env env{{"a1", "1"}, {"a0", "0"}, {"y", "1"}};
  auto g = bind_values(c.q.gamma, env), d = bind_values(c.q.delta, env);
  double v1 = ctf_probability(w1, g, d), v2 = ctf_probability(w2, g, d);
  CHECK(std::fabs(v1 - v2) >= 0.005);
  CHECK(std::fabs(v1 - oracle::ctf(w1, g, d)) < 1e-12);
  CHECK(std::fabs(v2 - oracle::ctf(w2, g, d)) < 1e-12);
}

TEST_CASE("identifiable counterfactuals with several worlds") {
  // Y_{a} with observed C and A in a back-door graph
  auto c = load("g6", "P(Y[A=a1]=y, C=c | A=a0)");
  auto r = run(c);
  REQUIRE(r.identifiable());
  CHECK(ctf_error(c, *r.estimand, {{"a1", "A"}, {"a0", "A"}, {"y", "Y"}, {"c", "C"}}) < 1e-9);
  // nested: natural direct effect term on the mediation graph
  auto n = load("g35", "P(Y[A=a1, M[A=a0]]=y)");
  auto rn = run(n);
  REQUIRE(rn.identifiable());
  CHECK(ctf_error(n, *rn.estimand, checks::contrast_symbols()) < 1e-9);
}

TEST_CASE("zero evidence") {
  auto c = load("g6", "P(Y[A=a1]=y | A[C=c]=a0, A[C=c]=a1)");
  auto gamma = bind_values(c.q.gamma, {{"a1", "1"}, {"y", "1"}});
  auto delta = bind_values(c.q.delta, {{"a1", "1"}, {"a0", "0"}, {"c", "1"}});
  try {
    identify_ctf_conditional(c.g, gamma, delta);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroEvidence);
  }
}
