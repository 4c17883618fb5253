#include "causid/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "causid/criteria.hpp"
#include "causid/identify.hpp"
#include "causid/scm.hpp"

namespace causid {

Admg random_admg(std::uint64_t seed, int max_nodes, bool markovian) {
  std::mt19937_64 rng(seed);
  int n = std::uniform_int_distribution<int>(2, std::max(2, max_nodes))(rng);
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("V" + std::to_string(i));
  std::vector<std::string> order = names;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution dir(0.45), bi(0.3);
  std::vector<Edge> d, b;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (dir(rng)) d.push_back({order[i], order[j]});
      if (!markovian && bi(rng)) b.push_back({order[i], order[j]});
    }
  return Admg::build(names, d, b);
}

namespace {

std::vector<std::string> pick(std::mt19937_64& rng, std::vector<std::string> pool, size_t k) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(k, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

FuzzReport run_fuzz(int graphs, std::uint64_t seed, bool markovian, double tolerance) {
  FuzzReport rep;
  std::mt19937_64 rng(seed);
  for (int gi = 0; gi < graphs; ++gi) {
    std::uint64_t gseed = rng();
    Admg g = random_admg(gseed, 6, markovian);
    std::string tag = "graph seed " + std::to_string(gseed);
    std::vector<std::string> nodes(g.nodes().begin(), g.nodes().end());
    size_t nx = std::bernoulli_distribution(0.3)(rng) && nodes.size() > 2 ? 2 : 1;
    auto xs = pick(rng, nodes, nx);
    std::vector<std::string> rest;
    for (const auto& v : nodes)
      if (std::find(xs.begin(), xs.end(), v) == xs.end()) rest.push_back(v);
    auto ys = pick(rng, rest, std::bernoulli_distribution(0.3)(rng) ? 2 : 1);
    NodeSet x(xs.begin(), xs.end()), y(ys.begin(), ys.end());
    ++rep.graphs;

    IdentResult r = identify(g, x, y);
    if (!r.identifiable()) {
      if (markovian) rep.failures.push_back(tag + ": Markovian graph reported not identifiable");
      continue;
    }
    ++rep.identifiable;
    IdentResult raw = identify(g, x, y, {false, false});
    if (!raw.identifiable()) {
      rep.failures.push_back(tag + ": verdict depends on options");
      continue;
    }
    DiscreteScm m = random_scm_mixed(g, gseed ^ 0x9e3779b97f4a7c15ULL, 3);
    Distribution obs = joint(m);
    std::vector<std::string> vars(x.begin(), x.end());
    vars.insert(vars.end(), y.begin(), y.end());
    std::map<std::string, std::string> env, doset;
    std::function<void(size_t)> go = [&](size_t i) {
      if (i == vars.size()) {
        std::map<std::string, std::string> event;
        for (const auto& v : y) event[v] = env[default_symbol(g, v)];
        for (const auto& v : x) doset[v] = env[default_symbol(g, v)];
        double truth = intervene(m, doset).prob(event);
        for (const auto* e : {&*r.estimand, &*raw.estimand}) {
          double got = eval_estimand(*e, obs, env);
          double err = std::fabs(got - truth);
          rep.max_error = std::max(rep.max_error, err);
          ++rep.checks;
          if (!(err <= tolerance))
            rep.failures.push_back(tag + ": " + render(*e, Format::Text, &g.nodes()) + " = " + std::to_string(got) +
                                   ", expected " + std::to_string(truth));
        }
        return;
      }
      for (const auto& t : m.variable(vars[i]).domain) {
        env[default_symbol(g, vars[i])] = t;
        go(i + 1);
      }
    };
    go(0);
  }
  return rep;
}

}  // namespace causid
