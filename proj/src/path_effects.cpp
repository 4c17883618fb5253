#include "causid/path_effects.hpp"

#include <algorithm>

#include "causid/counterfactual.hpp"
#include "causid/criteria.hpp"

namespace causid {

PathSet make_path_set(const Admg& g, const std::string& a, const std::string& y, std::vector<Path> paths) {
  g.require(a);
  g.require(y);
  if (a == y) throw Error(ErrorCode::DegenerateQuery, "treatment and outcome coincide");
  if (paths.empty()) throw Error(ErrorCode::InvalidArgument, "empty path set");
  auto all = proper_causal_paths(g, a, y);
  PathSet out{a, y, {}, {}};
  for (auto& p : paths) {
    for (const auto& v : p) g.require(v);
    if (std::find(all.begin(), all.end(), p) == all.end())
      throw Error(ErrorCode::InvalidArgument, "not a causal path from " + a + " to " + y + ": " + format_path(p));
    for (size_t i = 0; i + 1 < p.size(); ++i) out.active.insert({p[i], p[i + 1]});
    if (std::find(out.paths.begin(), out.paths.end(), p) == out.paths.end()) out.paths.push_back(std::move(p));
  }
  return out;
}

NodeSet mediators(const Admg& g, const std::string& a, const std::string& y) {
  NodeSet de = descendants(g, {a}), an = ancestors(g, {y}), out;
  for (const auto& v : de)
    if (an.count(v) && v != a && v != y) out.insert(v);
  return out;
}

namespace {

void check_effect(const Admg& g, const std::string& a, const std::string& y, const std::string& a1,
                  const std::string& a0) {
  g.require(a);
  g.require(y);
  if (a == y) throw Error(ErrorCode::DegenerateQuery, "treatment and outcome coincide");
  if (a1 == a0) throw Error(ErrorCode::DegenerateContrast, "active and baseline values are equal");
}

std::vector<Atom> with(std::vector<Atom> xs, const std::vector<Atom>& more) {
  xs.insert(xs.end(), more.begin(), more.end());
  return xs;
}

std::vector<Binding> binds(const std::vector<Atom>& atoms) {
  std::vector<Binding> out;
  for (const auto& x : atoms) out.push_back({x.var, x.value});
  return out;
}

std::vector<NodeSet> subsets_by_size(const std::vector<std::string>& cand) {
  std::vector<NodeSet> out;
  for (size_t mask = 0; mask < (size_t{1} << cand.size()); ++mask) {
    NodeSet s;
    for (size_t i = 0; i < cand.size(); ++i)
      if (mask >> i & 1) s.insert(cand[i]);
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const NodeSet& l, const NodeSet& r) {
    return l.size() != r.size() ? l.size() < r.size() : l < r;
  });
  return out;
}

// Covariates that deconfound A->Y, A->M and M->Y at once.
bool mediation_admissible(const Admg& g, const std::string& a, const std::string& y, const NodeSet& m,
                          const NodeSet& c) {
  if (!is_backdoor_admissible(g, a, y, c).admissible) return false;
  if (!m.empty()) {
    if (!m_separated(mutilate(g, {}, {a}), {a}, m, c)) return false;
    NodeSet am = c;
    am.insert(a);
    if (!m_separated(mutilate(g, {}, m), m, {y}, am)) return false;
  }
  return true;
}

enum class Effect { NDE, NIE };

IdentResult markovian_mediation(const Admg& g, Effect kind, const std::string& a, const std::string& y,
                                const std::string& a1, const std::string& a0, const std::optional<NodeSet>& z) {
  NodeSet m = mediators(g, a, y);
  NodeSet c;
  if (z) {
    c = *z;
    if (!mediation_admissible(g, a, y, m, c))
      throw Error(ErrorCode::BadAdjustmentSet, format_set(c) + " does not deconfound the mediation model");
  } else {
    NodeSet de = descendants(g, {a});
    std::vector<std::string> cand;
    for (const auto& v : ancestors(g, NodeSet{y}))
      if (!de.count(v)) cand.push_back(v);
    bool found = false;
    for (const auto& s : subsets_by_size(cand))
      if (mediation_admissible(g, a, y, m, s)) {
        c = s;
        found = true;
        break;
      }
    if (!found) throw Error(ErrorCode::BadAdjustmentSet, "no covariate set deconfounds the mediation model");
  }
  auto ms = default_atoms(g, m);
  auto cs = default_atoms(g, c);
  Atom x1{a, a1}, x0{a, a0};
  Estimand pc = cs.empty() ? Estimand::constant(1.0) : Estimand::term(cs);
  Estimand body;
  if (kind == Effect::NDE) {
    Estimand diff = Estimand::difference(Estimand::expectation(y, with(with({x1}, ms), cs)),
                                         Estimand::expectation(y, with(with({x0}, ms), cs)));
    Estimand pm = ms.empty() ? Estimand::constant(1.0) : Estimand::term(ms, with({x0}, cs));
    body = product_of({diff, pm, pc});
  } else {
    if (ms.empty()) return IdentResult::ok(Estimand::constant(0.0));
    Estimand ey = Estimand::expectation(y, with(with({x0}, ms), cs));
    Estimand diff = Estimand::difference(Estimand::term(ms, with({x1}, cs)), Estimand::term(ms, with({x0}, cs)));
    body = product_of({ey, diff, pc});
  }
  std::vector<Binding> b = binds(cs);
  auto bm = binds(ms);
  b.insert(b.end(), bm.begin(), bm.end());
  return IdentResult::ok(sum_of(b, body));
}

// P(w, z | do(x)) / P(z), or the numerator alone when z is empty.
std::optional<Estimand> conditional_effect(const Admg& g, const std::vector<Atom>& x, const std::vector<Atom>& w,
                                           const std::vector<Atom>& z, std::optional<Witness>& why) {
  IdentifyOptions opt;
  opt.simplify = false;
  IdentResult r = identify_atoms(g, x, with(w, z), opt);
  if (!r.identifiable()) {
    why = r.witness;
    return std::nullopt;
  }
  if (z.empty()) return *r.estimand;
  return Estimand::quotient(*r.estimand, Estimand::term(z));
}

bool independent_in_cg(const Admg& g, const std::vector<Atom>& ysub, const std::string& y, const std::string& a,
                       const std::string& a_m, const std::vector<Atom>& ms, const std::vector<Atom>& zs) {
  // Y_{a', m} against M_{a} given Z, read off the parallel-worlds graph
  CtfAtom ya{y, "#y", {}};
  for (const auto& s : ysub) ya.subscript.push_back({s.var, s.value, nullptr});
  Conjunction q{ya};
  for (const auto& mv : ms) q.push_back({mv.var, "#" + mv.value, {{a, a_m, nullptr}}});
  for (const auto& zv : zs) q.push_back({zv.var, zv.value, {}});
  CgResult cg = make_cg(g, q);
  if (cg.inconsistent) return false;
  NodeSet ynode{cg.query[0].first}, mnode, znode;
  for (size_t i = 1; i <= ms.size(); ++i) mnode.insert(cg.query[i].first);
  for (size_t i = 1 + ms.size(); i < cg.query.size(); ++i) znode.insert(cg.query[i].first);
  for (const auto& v : mnode)
    if (ynode.count(v) || znode.count(v)) return false;
  return m_separated(cg.wg.restricted, ynode, mnode, znode);
}

IdentResult semi_markovian_mediation(const Admg& g, Effect kind, const std::string& a, const std::string& y,
                                     const std::string& a1, const std::string& a0,
                                     const std::optional<NodeSet>& z) {
  NodeSet m = mediators(g, a, y);
  if (m.empty() && kind == Effect::NIE) return IdentResult::ok(Estimand::constant(0.0));
  NodeSet am = m;
  am.insert(a);
  NodeSet de = descendants(g, am);
  std::vector<NodeSet> cands;
  if (z) {
    for (const auto& v : *z)
      if (de.count(v)) throw Error(ErrorCode::BadAdjustmentSet, v + " is a descendant of the treatment or a mediator");
    cands.push_back(*z);
  } else {
    std::vector<std::string> pool;
    for (const auto& v : g.nodes())
      if (!de.count(v)) pool.push_back(v);
    cands = subsets_by_size(pool);
  }
  auto ms = default_atoms(g, m);
  std::string ysym = default_symbol(g, y);
  // the Y world keeps m fixed; the mediator world differs in a only
  const std::string& y_a = kind == Effect::NDE ? a1 : a0;
  const std::string& m_a = kind == Effect::NDE ? a0 : a1;
  std::optional<Witness> why;
  for (const auto& zset : cands) {
    auto zs = default_atoms(g, zset);
    std::vector<Atom> ysub = with({{a, y_a}}, ms);
    if (!independent_in_cg(g, ysub, y, a, m_a, ms, zs)) continue;
    auto mean_y = [&](const std::string& av) -> std::optional<Estimand> {
      auto q = conditional_effect(g, with({{a, av}}, ms), {{y, ysym}}, zs, why);
      if (!q) return std::nullopt;
      return Estimand::mean({y, ysym}, *q);
    };
    auto p_m = [&](const std::string& av) -> std::optional<Estimand> {
      if (ms.empty()) return Estimand::constant(1.0);
      return conditional_effect(g, {{a, av}}, ms, zs, why);
    };
    Estimand pz = zs.empty() ? Estimand::constant(1.0) : Estimand::term(zs);
    std::optional<Estimand> body;
    if (kind == Effect::NDE) {
      auto e1 = mean_y(a1), e0 = mean_y(a0), pm = p_m(a0);
      if (!e1 || !e0 || !pm) continue;
      body = product_of({Estimand::difference(*e1, *e0), *pm, pz});
    } else {
      auto e0 = mean_y(a0), p1 = p_m(a1), p0 = p_m(a0);
      if (!e0 || !p1 || !p0) continue;
      body = product_of({*e0, Estimand::difference(*p1, *p0), pz});
    }
    std::vector<Binding> b = binds(ms);
    auto bz = binds(zs);
    b.insert(b.begin(), bz.begin(), bz.end());
    IdentResult r = IdentResult::ok(sum_of(b, *body));
    r.diagnostics.push_back("covariates " + format_set(zset));
    return r;
  }
  if (why) return IdentResult::fail(*why);
  return IdentResult::fail(CtfWitness{{a, y}, "no covariate set satisfies the independence condition"});
}

IdentResult mediation(const Admg& g, Effect kind, const std::string& a, const std::string& y, const std::string& a1,
                      const std::string& a0, const std::optional<NodeSet>& z) {
  check_effect(g, a, y, a1, a0);
  if (z) {
    g.require(*z);
    NodeSet de = descendants(g, {a});
    for (const auto& v : *z)
      if (de.count(v)) throw Error(ErrorCode::BadAdjustmentSet, v + " is a descendant of " + a);
  }
  IdentResult r = g.is_markovian() ? markovian_mediation(g, kind, a, y, a1, a0, z)
                                   : semi_markovian_mediation(g, kind, a, y, a1, a0, z);
  if (r.identifiable()) {
    auto d = r.diagnostics;
    r.estimand = hygienic(simplify(hygienic(*r.estimand), g));
    r.diagnostics = d;
  }
  if (kind == Effect::NIE && !g.parents(a).empty())
    r.diagnostics.push_back("warning: " + a + " has parents; the NIE formula assumes it has none");
  return r;
}

// Reachability of y from each node: along active edges only, and along some
// path that uses at least one inactive edge.
struct Reach {
  NodeSet all_active, mixed;
};

Reach reach(const Admg& g, const PathSet& pi, const NodeSet& within) {
  Reach r;
  auto order = topological_order(g);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& v = *it;
    if (!within.count(v)) continue;
    if (v == pi.y) {
      r.all_active.insert(v);
      continue;
    }
    for (const auto& c : g.children(v)) {
      if (!within.count(c)) continue;
      bool act = pi.active.count({v, c}) > 0;
      if (act && r.all_active.count(c)) r.all_active.insert(v);
      if (!act || r.mixed.count(c)) r.mixed.insert(v);
    }
  }
  return r;
}

NodeSet ancestral_without_a(const Admg& g, const std::string& a, const std::string& y) {
  NodeSet rest = g.nodes();
  rest.erase(a);
  return ancestors(induced(g, rest), {y});
}

}  // namespace

IdentResult nde_estimand(const Admg& g, const std::string& a, const std::string& y, const std::string& a1,
                         const std::string& a0, const std::optional<NodeSet>& z) {
  return mediation(g, Effect::NDE, a, y, a1, a0, z);
}

IdentResult nie_estimand(const Admg& g, const std::string& a, const std::string& y, const std::string& a1,
                         const std::string& a0, const std::optional<NodeSet>& z) {
  return mediation(g, Effect::NIE, a, y, a1, a0, z);
}

std::optional<PseWitness> recanting_witness(const Admg& g, const PathSet& pi) {
  if (!g.is_markovian()) throw Error(ErrorCode::NotMarkovian, "recanting witness needs a Markovian graph");
  NodeSet v = ancestral_without_a(g, pi.a, pi.y);
  v.insert(pi.a);
  Reach r = reach(g, pi, v);
  NodeSet on_pi;
  for (const auto& p : pi.paths)
    for (size_t i = 1; i + 1 < p.size(); ++i) on_pi.insert(p[i]);
  NodeSet w;
  for (const auto& n : on_pi)
    if (r.mixed.count(n)) w.insert(n);
  if (w.empty()) return std::nullopt;
  return PseWitness{PseWitness::Kind::RecantingWitness, w};
}

std::optional<PseWitness> recanting_district(const Admg& g, const PathSet& pi) {
  NodeSet v = ancestral_without_a(g, pi.a, pi.y);
  Reach r = reach(g, pi, v);
  for (const auto& d : c_components(induced(g, v))) {
    bool in = false, out = false;
    for (const auto& n : d) {
      if (!g.has_directed(pi.a, n)) continue;
      bool act = pi.active.count({pi.a, n}) > 0;
      if (act && r.all_active.count(n)) in = true;
      if (!act || r.mixed.count(n)) out = true;
    }
    if (in && out) return PseWitness{PseWitness::Kind::RecantingDistrict, d};
  }
  return std::nullopt;
}

IdentResult pse_term_estimand(const Admg& g, const PathSet& pi, const std::string& a1, const std::string& a0,
                              const std::string& yval) {
  check_effect(g, pi.a, pi.y, a1, a0);
  const std::string& a = pi.a;
  const std::string& y = pi.y;
  std::string ys = yval.empty() ? default_symbol(g, y) : yval;
  auto value_of = [&](const std::string& v) { return v == y ? ys : default_symbol(g, v); };
  auto a_into = [&](const std::string& child) { return pi.active.count({a, child}) ? a1 : a0; };

  if (g.is_markovian()) {
    if (auto w = recanting_witness(g, pi)) return IdentResult::fail(*w);
    std::vector<Estimand> fs;
    std::vector<Binding> b;
    for (const auto& v : topological_order(g)) {
      if (v == a) continue;
      std::vector<Atom> given;
      for (const auto& p : g.parents(v)) given.push_back({p, p == a ? a_into(v) : value_of(p)});
      fs.push_back(Estimand::term({{v, value_of(v)}}, given));
      if (v != y) b.push_back({v, value_of(v)});
    }
    IdentResult r = IdentResult::ok(sum_of(b, product_of(fs)));
    r.estimand = hygienic(simplify(*r.estimand, g));
    return r;
  }

  if (auto d = recanting_district(g, pi)) return IdentResult::fail(*d);
  NodeSet vset = ancestral_without_a(g, a, y);
  IdentifyOptions opt;
  opt.simplify = false;
  std::vector<Estimand> fs;
  auto order = topological_order(g);
  auto comps = c_components(induced(g, vset));
  auto first = [&](const NodeSet& s) {
    for (size_t i = 0; i < order.size(); ++i)
      if (s.count(order[i])) return i;
    return order.size();
  };
  std::stable_sort(comps.begin(), comps.end(), [&](const NodeSet& l, const NodeSet& r) { return first(l) < first(r); });
  for (const auto& d : comps) {
    NodeSet e;
    for (const auto& n : d)
      for (const auto& p : g.parents(n))
        if (!d.count(p)) e.insert(p);
    std::vector<Atom> xs, ds;
    for (const auto& p : e) {
      if (p == a) {
        std::string val;
        for (const auto& n : d)
          if (g.has_directed(a, n)) val = a_into(n);
        xs.push_back({a, val});
      } else {
        xs.push_back({p, value_of(p)});
      }
    }
    for (const auto& n : d) ds.push_back({n, value_of(n)});
    IdentResult r = identify_atoms(g, xs, ds, opt);
    if (!r.identifiable()) return r;
    fs.push_back(*r.estimand);
  }
  std::vector<Binding> b;
  for (const auto& v : order)
    if (vset.count(v) && v != y) b.push_back({v, value_of(v)});
  IdentResult r = IdentResult::ok(sum_of(b, product_of(fs)));
  r.estimand = hygienic(simplify(hygienic(*r.estimand), g));
  return r;
}

IdentResult pse_estimand(const Admg& g, const PathSet& pi, const std::string& a1, const std::string& a0,
                         const std::string& yval) {
  IdentResult t = pse_term_estimand(g, pi, a1, a0, yval);
  if (!t.identifiable()) return t;
  std::string ys = yval.empty() ? default_symbol(g, pi.y) : yval;
  IdentResult base = identify_atoms(g, {{pi.a, a0}}, {{pi.y, ys}});
  if (!base.identifiable()) return base;
  return IdentResult::ok(Estimand::difference(*t.estimand, *base.estimand));
}

}  // namespace causid
