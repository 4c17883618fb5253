#include "causid/identify.hpp"

#include <algorithm>

#include "causid/criteria.hpp"

namespace causid {

std::string render_witness(const Witness& w) {
  if (auto h = std::get_if<Hedge>(&w)) return "F=" + format_set(h->f) + " F'=" + format_set(h->f_prime);
  if (auto p = std::get_if<PseWitness>(&w))
    return std::string(p->kind == PseWitness::Kind::RecantingWitness ? "recanting witness " : "recanting district ") +
           format_set(p->nodes);
  const auto& c = std::get<CtfWitness>(w);
  std::string out = "counterfactual district {";
  for (size_t i = 0; i < c.nodes.size(); ++i) out += (i ? "," : "") + c.nodes[i];
  return out + "}: " + c.reason;
}

namespace {

// Current distribution in the recursion. `plain` means it is still the
// observational marginal over `vars`, so conditionals are single terms.
struct Prob {
  Estimand expr;
  NodeSet vars;
  bool plain;
};

struct Engine {
  const Admg& base;

  Atom atom(const std::string& v) const { return {v, default_symbol(base, v)}; }

  std::vector<Atom> atoms(const NodeSet& s) const {
    std::vector<Atom> out;
    for (const auto& v : s) out.push_back(atom(v));
    return out;
  }

  std::vector<Binding> binds(const NodeSet& s) const {
    std::vector<Binding> out;
    for (const auto& v : s) out.push_back({v, default_symbol(base, v)});
    return out;
  }

  Estimand marg(const Prob& p, const NodeSet& keep) const {
    if (keep.empty()) return Estimand::constant(1.0);
    if (p.plain) return Estimand::term(atoms(keep));
    NodeSet drop;
    for (const auto& v : p.vars)
      if (!keep.count(v)) drop.insert(v);
    return sum_of(binds(drop), p.expr);
  }

  Estimand conditional(const Prob& p, const std::string& v, const NodeSet& pred) const {
    if (p.plain) return Estimand::term({atom(v)}, atoms(pred));
    NodeSet both = pred;
    both.insert(v);
    Estimand num = marg(p, both);
    if (pred.empty()) return num;
    return Estimand::quotient(num, marg(p, pred));
  }

  // factors P(v | predecessors in topological order of g) for v in s
  std::vector<Estimand> factors(const Prob& p, const Admg& g, const NodeSet& s) const {
    std::vector<Estimand> out;
    NodeSet pred;
    for (const auto& v : topological_order(g)) {
      if (s.count(v)) out.push_back(conditional(p, v, pred));
      pred.insert(v);
    }
    return out;
  }

  struct Res {
    std::optional<Estimand> e;
    std::optional<Hedge> h;
  };

  Res run(const NodeSet& y, const NodeSet& x, const Prob& p, const Admg& g) const {
    const NodeSet& v = g.nodes();
    // 1
    if (x.empty()) return {marg(p, y), {}};
    // 2
    NodeSet an = ancestors(g, y);
    if (an != v) {
      NodeSet drop;
      for (const auto& n : v)
        if (!an.count(n)) drop.insert(n);
      Prob q = p.plain ? Prob{Estimand::term(atoms(an)), an, true} : Prob{sum_of(binds(drop), p.expr), an, false};
      NodeSet x2;
      for (const auto& n : x)
        if (an.count(n)) x2.insert(n);
      return run(y, x2, q, induced(g, an));
    }
    // 3
    NodeSet an_x = ancestors(mutilate(g, x), y);
    NodeSet w;
    for (const auto& n : v)
      if (!x.count(n) && !an_x.count(n)) w.insert(n);
    if (!w.empty()) {
      NodeSet x2 = x;
      x2.insert(w.begin(), w.end());
      Res r = run(y, x2, p, g);
      if (!r.e) return r;
      // the result does not depend on w; average it out so no symbol is left free
      return {sum_of(binds(w), product_of({marg(p, w), *r.e})), {}};
    }
    // 4
    NodeSet rest;
    for (const auto& n : v)
      if (!x.count(n)) rest.insert(n);
    auto comps = c_components(induced(g, rest));
    if (comps.size() > 1) {
      std::vector<Estimand> fs;
      for (const auto& s : comps) {
        NodeSet xs;
        for (const auto& n : v)
          if (!s.count(n)) xs.insert(n);
        Res r = run(s, xs, p, g);
        if (!r.e) return r;
        fs.push_back(*r.e);
      }
      NodeSet bound;
      for (const auto& n : v)
        if (!y.count(n) && !x.count(n)) bound.insert(n);
      return {sum_of(binds(bound), product_of(fs)), {}};
    }
    const NodeSet& s = comps.front();
    auto all = c_components(g);
    // 5
    if (all.size() == 1) {
      NodeSet roots;
      for (const auto& n : s) {
        bool sink = true;
        for (const auto& c : g.children(n))
          if (s.count(c)) sink = false;
        if (sink) roots.insert(n);
      }
      return {std::nullopt, Hedge{v, s, roots}};
    }
    // 6
    if (std::find(all.begin(), all.end(), s) != all.end()) {
      NodeSet bound;
      for (const auto& n : s)
        if (!y.count(n)) bound.insert(n);
      return {sum_of(binds(bound), product_of(factors(p, g, s))), {}};
    }
    // 7
    for (const auto& sp : all) {
      if (!std::includes(sp.begin(), sp.end(), s.begin(), s.end())) continue;
      Prob q{product_of(factors(p, g, sp)), sp, false};
      NodeSet x2;
      for (const auto& n : x)
        if (sp.count(n)) x2.insert(n);
      return run(y, x2, q, induced(g, sp));
    }
    throw Error(ErrorCode::InvalidArgument, "internal: district not contained in any c-component");
  }
};

NodeSet vars_of(const std::vector<Atom>& a) {
  NodeSet out;
  for (const auto& x : a) out.insert(x.var);
  return out;
}

Estimand finish(const Estimand& e, const Admg& g, const IdentifyOptions& opt) {
  Estimand out = hygienic(e);
  if (opt.simplify) out = hygienic(simplify(out, g));
  return out;
}

}  // namespace

IdentResult identify_atoms(const Admg& g, const std::vector<Atom>& x, const std::vector<Atom>& y,
                           const IdentifyOptions& opt) {
  NodeSet xs = vars_of(x), ys = vars_of(y);
  g.require(xs);
  g.require(ys);
  if (ys.empty()) throw Error(ErrorCode::InvalidArgument, "empty outcome set");
  if (xs.size() != x.size() || ys.size() != y.size())
    throw Error(ErrorCode::InconsistentQuery, "a variable is listed twice");
  for (const auto& v : xs)
    if (ys.count(v)) throw Error(ErrorCode::DegenerateQuery, v + " is both treated and measured");

  if (opt.prefer_criteria && x.size() == 1 && y.size() == 1) {
    const Atom& a = x[0];
    const Atom& t = y[0];
    auto sets = enumerate_backdoor_sets(g, a.var, t.var);
    if (!sets.empty()) return IdentResult::ok(backdoor_estimand(a, t, sets.front().nodes));
    std::vector<std::string> cand;
    for (const auto& v : g.nodes())
      if (v != a.var && v != t.var) cand.push_back(v);
    std::vector<NodeSet> ms;
    for (size_t mask = 1; mask < (size_t{1} << cand.size()); ++mask) {
      NodeSet m;
      for (size_t i = 0; i < cand.size(); ++i)
        if (mask >> i & 1) m.insert(cand[i]);
      ms.push_back(m);
    }
    std::sort(ms.begin(), ms.end(), [](const NodeSet& l, const NodeSet& r) {
      return l.size() != r.size() ? l.size() < r.size() : l < r;
    });
    for (const auto& m : ms)
      if (is_frontdoor_admissible(g, a.var, t.var, m).admissible) return IdentResult::ok(frontdoor_estimand(a, t, m));
    if (auto e = tian_effect_estimand(g, a, t)) return IdentResult::ok(*e);
  }

  Engine eng{g};
  Prob p0{Estimand::term(eng.atoms(g.nodes())), g.nodes(), true};
  auto r = eng.run(ys, xs, p0, g);
  if (!r.e) return IdentResult::fail(*r.h);
  std::map<std::string, std::string> sub;
  for (const auto* list : {&x, &y})
    for (const auto& a : *list)
      if (a.value != default_symbol(g, a.var)) sub[default_symbol(g, a.var)] = a.value;
  // two-step rename so swaps such as a->y, y->a cannot collide
  std::map<std::string, std::string> tmp, back;
  std::set<std::string> used = all_symbols(*r.e);
  for (const auto& [k, v] : sub) used.insert(v);
  for (const auto& [k, v] : sub) {
    std::string t = fresh_symbol("#" + k, used);
    used.insert(t);
    tmp[k] = t;
    back[t] = v;
  }
  Estimand e = substitute(substitute(*r.e, tmp), back);
  return IdentResult::ok(finish(e, g, opt));
}

IdentResult identify(const Admg& g, const NodeSet& x, const NodeSet& y, const IdentifyOptions& opt) {
  g.require(x);
  g.require(y);
  return identify_atoms(g, default_atoms(g, x), default_atoms(g, y), opt);
}

IdentResult identify_conditional(const Admg& g, std::vector<Atom> x, const std::vector<Atom>& y, std::vector<Atom> z,
                                 const IdentifyOptions& opt) {
  auto names = [](const std::vector<Atom>& v) {
    NodeSet s;
    for (const auto& a : v) s.insert(a.var);
    return s;
  };
  // rule 2 moves observed z into the intervention set while it applies
  for (bool moved = true; moved;) {
    moved = false;
    for (size_t i = 0; i < z.size(); ++i) {
      NodeSet rest = names(z);
      rest.erase(z[i].var);
      if (rule2_applies(g, names(y), names(x), {z[i].var}, rest)) {
        x.push_back(z[i]);
        z.erase(z.begin() + static_cast<long>(i));
        moved = true;
        break;
      }
    }
  }
  if (z.empty()) return identify_atoms(g, x, y, opt);
  IdentifyOptions inner = opt;
  inner.simplify = false;
  std::vector<Atom> yz = y;
  yz.insert(yz.end(), z.begin(), z.end());
  IdentResult num = identify_atoms(g, x, yz, inner);
  if (!num.identifiable()) return num;
  IdentResult den = identify_atoms(g, x, z, inner);
  if (!den.identifiable()) return den;
  Estimand e = Estimand::quotient(*num.estimand, *den.estimand);
  if (opt.simplify) e = hygienic(simplify(hygienic(e), g));
  return IdentResult::ok(e);
}

namespace {

bool rooted_component(const Admg& g, const NodeSet& s, const NodeSet& roots) {
  if (s.empty()) return false;
  Admg h = induced(g, s);
  if (c_components(h).size() != 1) return false;
  for (const auto& r : roots)
    if (!h.children(r).empty()) return false;
  NodeSet reach = ancestors(h, roots);
  return reach == s;
}

}  // namespace

bool verify_hedge(const Admg& g, const Hedge& h, const NodeSet& x, const NodeSet& y) {
  g.require(h.f);
  g.require(h.f_prime);
  g.require(h.root_set);
  if (h.root_set.empty()) return false;
  if (!std::includes(h.f.begin(), h.f.end(), h.f_prime.begin(), h.f_prime.end())) return false;
  if (!std::includes(h.f_prime.begin(), h.f_prime.end(), h.root_set.begin(), h.root_set.end())) return false;
  bool x_in_f = false;
  for (const auto& v : x) {
    if (h.f_prime.count(v)) return false;
    if (h.f.count(v)) x_in_f = true;
  }
  if (!x_in_f) return false;
  NodeSet an = ancestors(mutilate(g, x), y);
  for (const auto& r : h.root_set)
    if (!an.count(r)) return false;
  return rooted_component(g, h.f, h.root_set) && rooted_component(g, h.f_prime, h.root_set);
}

bool rule1_applies(const Admg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& w) {
  NodeSet cond = x;
  cond.insert(w.begin(), w.end());
  return m_separated(mutilate(g, x), y, z, cond);
}

bool rule2_applies(const Admg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& w) {
  NodeSet cond = x;
  cond.insert(w.begin(), w.end());
  return m_separated(mutilate(g, x, z), y, z, cond);
}

bool rule3_applies(const Admg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& w) {
  NodeSet cond = x;
  cond.insert(w.begin(), w.end());
  NodeSet an_w = w.empty() ? NodeSet{} : ancestors(mutilate(g, x), w);
  NodeSet zw;
  for (const auto& v : z)
    if (!an_w.count(v)) zw.insert(v);
  NodeSet cut = x;
  cut.insert(zw.begin(), zw.end());
  return m_separated(mutilate(g, cut), y, z, cond);
}

}  // namespace causid
