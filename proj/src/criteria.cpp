#include "causid/criteria.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace causid {

std::string default_symbol(const Admg& g, const std::string& v) {
  auto low = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  std::string l = low(v);
  for (const auto& u : g.nodes())
    if (u != v && low(u) == l) return v;
  return l;
}

std::vector<Atom> default_atoms(const Admg& g, const NodeSet& s) {
  std::vector<Atom> out;
  for (const auto& v : s) out.push_back({v, default_symbol(g, v)});
  return out;
}

namespace {

enum class EdgeKind { Fwd, Bwd, Bi };  // prev->v, prev<-v, prev<->v

struct Walk {
  std::vector<std::string> nodes;
  std::vector<EdgeKind> edges;  // edges[i] joins nodes[i] and nodes[i+1]

  std::string str() const {
    std::string out = nodes[0];
    for (size_t i = 0; i < edges.size(); ++i) {
      out += edges[i] == EdgeKind::Fwd ? "->" : edges[i] == EdgeKind::Bwd ? "<-" : "<->";
      out += nodes[i + 1];
    }
    return out;
  }
};

// simple paths from a to y whose first edge has an arrowhead at a
std::vector<Walk> backdoor_paths(const Admg& g, const std::string& a, const std::string& y) {
  std::vector<Walk> out;
  Walk cur{{a}, {}};
  NodeSet on{a};
  std::function<void(const std::string&)> dfs = [&](const std::string& v) {
    if (v == y) {
      out.push_back(cur);
      return;
    }
    auto step = [&](const std::string& w, EdgeKind k) {
      if (on.count(w)) return;
      if (cur.edges.empty() && k == EdgeKind::Fwd) return;
      cur.nodes.push_back(w);
      cur.edges.push_back(k);
      on.insert(w);
      dfs(w);
      on.erase(w);
      cur.nodes.pop_back();
      cur.edges.pop_back();
    };
    for (const auto& p : g.parents(v)) step(p, EdgeKind::Bwd);
    for (const auto& s : g.spouses(v)) step(s, EdgeKind::Bi);
    for (const auto& c : g.children(v)) step(c, EdgeKind::Fwd);
  };
  dfs(a);
  return out;
}

bool open_given(const Walk& w, const NodeSet& c, const NodeSet& anc) {
  for (size_t i = 1; i + 1 < w.nodes.size(); ++i) {
    bool in_prev = w.edges[i - 1] != EdgeKind::Bwd;  // arrowhead at nodes[i] from the left
    bool in_next = w.edges[i] != EdgeKind::Fwd;      // arrowhead at nodes[i] from the right
    const auto& v = w.nodes[i];
    if (in_prev && in_next) {
      if (!anc.count(v)) return false;
    } else if (c.count(v)) {
      return false;
    }
  }
  return true;
}

void check_query(const Admg& g, const std::string& a, const std::string& y) {
  g.require(a);
  g.require(y);
  if (a == y) throw Error(ErrorCode::DegenerateQuery, "treatment and outcome are both " + a);
}

std::vector<Atom> atoms_of(const Admg* g, const NodeSet& s, const std::set<std::string>& avoid) {
  std::vector<Atom> out;
  for (const auto& v : s) {
    std::string sym = g ? default_symbol(*g, v) : std::string();
    if (!g) {
      sym = v;
      for (auto& ch : sym) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    out.push_back({v, fresh_symbol(sym, avoid)});
  }
  return out;
}

std::vector<Binding> bindings(const std::vector<Atom>& atoms) {
  std::vector<Binding> out;
  for (const auto& a : atoms) out.push_back({a.var, a.value});
  return out;
}

}  // namespace

AdjustmentReport is_backdoor_admissible(const Admg& g, const std::string& a, const std::string& y, const NodeSet& c) {
  check_query(g, a, y);
  g.require(c);
  if (c.count(a) || c.count(y)) throw Error(ErrorCode::InvalidArgument, "adjustment set contains treatment or outcome");
  AdjustmentReport r;
  NodeSet de = descendants(g, {a});
  for (const auto& v : c)
    if (de.count(v)) {
      auto paths = proper_causal_paths(g, a, v);
      r.violations.push_back({paths.empty() ? a + "->...->" + v : format_path(paths.front()), "descendant-in-set"});
    }
  NodeSet anc = ancestors(g, c);
  for (const auto& w : backdoor_paths(g, a, y))
    if (open_given(w, c, anc)) r.violations.push_back({w.str(), "open-backdoor"});
  r.admissible = r.violations.empty();
  return r;
}

std::vector<AdjustmentSet> enumerate_backdoor_sets(const Admg& g, const std::string& a, const std::string& y,
                                                   int max_size) {
  check_query(g, a, y);
  std::vector<std::string> cand;
  for (const auto& v : g.nodes())
    if (v != a && v != y) cand.push_back(v);
  size_t cap = max_size < 0 ? cand.size() : std::min(cand.size(), static_cast<size_t>(max_size));
  std::vector<NodeSet> subsets;
  for (size_t mask = 0; mask < (size_t{1} << cand.size()); ++mask) {
    NodeSet s;
    for (size_t i = 0; i < cand.size(); ++i)
      if (mask >> i & 1) s.insert(cand[i]);
    if (s.size() <= cap) subsets.push_back(s);
  }
  std::sort(subsets.begin(), subsets.end(), [](const NodeSet& l, const NodeSet& r) {
    if (l.size() != r.size()) return l.size() < r.size();
    return l < r;
  });
  std::vector<AdjustmentSet> out;
  for (const auto& s : subsets) {
    if (!is_backdoor_admissible(g, a, y, s).admissible) continue;
    bool minimal = true;
    for (const auto& prev : out)
      if (std::includes(s.begin(), s.end(), prev.nodes.begin(), prev.nodes.end())) minimal = false;
    out.push_back({s, minimal});
  }
  return out;
}

Estimand backdoor_estimand(const Atom& a, const Atom& y, const NodeSet& c) {
  if (c.empty()) return Estimand::term({y}, {a});
  auto cs = atoms_of(nullptr, c, {a.value, y.value});
  std::vector<Atom> given{a};
  given.insert(given.end(), cs.begin(), cs.end());
  return Estimand::sum(bindings(cs), Estimand::product({Estimand::term({y}, given), Estimand::term(cs)}));
}

std::optional<Estimand> parents_estimand(const Admg& g, const Atom& a, const Atom& y) {
  check_query(g, a.var, y.var);
  if (!g.spouses(a.var).empty()) return std::nullopt;
  const auto& pa = g.parents(a.var);
  if (pa.count(y.var)) return Estimand::term({y});
  return backdoor_estimand(a, y, pa);
}

AdjustmentReport is_frontdoor_admissible(const Admg& g, const std::string& a, const std::string& y, const NodeSet& m) {
  check_query(g, a, y);
  g.require(m);
  if (m.count(a) || m.count(y)) throw Error(ErrorCode::InvalidArgument, "mediator set contains treatment or outcome");
  AdjustmentReport r;
  for (const auto& p : proper_causal_paths(g, a, y)) {
    bool hit = false;
    for (const auto& v : p)
      if (m.count(v)) hit = true;
    if (!hit) r.violations.push_back({format_path(p), "unintercepted-path"});
  }
  if (!m.empty()) {
    // back-door paths a...m: every path leaving a through an arrowhead
    for (const auto& v : m)
      for (const auto& w : backdoor_paths(g, a, v))
        if (open_given(w, {}, {})) r.violations.push_back({w.str(), "open-backdoor"});
    // back-door paths m...y must be blocked by a; read in the graph without edges out of m
    Admg gm = mutilate(g, {}, m);
    NodeSet anc = ancestors(gm, {a});
    for (const auto& v : m)
      for (const auto& w : backdoor_paths(gm, v, y))
        if (open_given(w, {a}, anc)) r.violations.push_back({w.str(), "open-backdoor"});
  }
  r.admissible = r.violations.empty();
  return r;
}

Estimand frontdoor_estimand(const Atom& a, const Atom& y, const NodeSet& m) {
  auto ms = atoms_of(nullptr, m, {a.value, y.value});
  std::set<std::string> used{a.value, y.value};
  for (const auto& x : ms) used.insert(x.value);
  Atom ap{a.var, fresh_symbol(a.value + "'", used)};
  std::vector<Atom> yg = ms;
  yg.push_back(ap);
  Estimand inner = Estimand::sum({{ap.var, ap.value}}, Estimand::product({Estimand::term({y}, yg), Estimand::term({ap})}));
  return Estimand::sum(bindings(ms), Estimand::product({Estimand::term(ms, {a}), inner}));
}

Estimand truncated_estimand(const Admg& g, const Atom& a, const Atom& y) {
  check_query(g, a.var, y.var);
  if (!g.is_markovian()) throw Error(ErrorCode::NotMarkovian, "truncated factorization needs a Markovian graph");
  std::map<std::string, Atom> at;
  for (const auto& v : g.nodes()) at[v] = {v, default_symbol(g, v)};
  at[a.var] = a;
  at[y.var] = y;
  auto order = topological_order(g);
  std::vector<Estimand> factors;
  std::vector<Binding> bound;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it == a.var) continue;
    std::vector<Atom> given;
    for (const auto& p : g.parents(*it)) given.push_back(at[p]);
    factors.push_back(Estimand::term({at[*it]}, given));
  }
  for (const auto& v : order)
    if (v != a.var && v != y.var) bound.push_back({v, at[v].value});
  return sum_of(bound, product_of(factors));
}

Estimand c_factor(const Admg& g, const NodeSet& component, const std::vector<std::string>& order) {
  auto comps = c_components(g);
  if (std::find(comps.begin(), comps.end(), component) == comps.end())
    throw Error(ErrorCode::NotAComponent, format_set(component));
  NodeSet listed(order.begin(), order.end());
  if (listed != g.nodes() || order.size() != listed.size())
    throw Error(ErrorCode::InvalidArgument, "order must list every node once");
  std::map<std::string, size_t> pos;
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const auto& [p, c] : g.directed())
    if (pos[p] > pos[c]) throw Error(ErrorCode::InvalidArgument, "order is not topological");
  std::vector<Estimand> factors;
  for (size_t i = 0; i < order.size(); ++i) {
    if (!component.count(order[i])) continue;
    std::vector<Atom> given;
    for (size_t j = 0; j < i; ++j) given.push_back({order[j], default_symbol(g, order[j])});
    factors.push_back(Estimand::term({{order[i], default_symbol(g, order[i])}}, given));
  }
  return product_of(factors);
}

std::optional<Estimand> tian_effect_estimand(const Admg& g, const Atom& a, const Atom& y) {
  check_query(g, a.var, y.var);
  NodeSet an = ancestors(g, {y.var});
  if (!an.count(a.var)) return Estimand::term({y});
  Admg h = induced(g, an);
  NodeSet sa = district_of(h, a.var);
  for (const auto& c : h.children(a.var))
    if (sa.count(c)) return std::nullopt;

  std::map<std::string, Atom> at;
  std::set<std::string> used{a.value, y.value};
  for (const auto& v : h.nodes()) {
    if (v == a.var || v == y.var) continue;
    at[v] = {v, fresh_symbol(default_symbol(g, v), used)};
    used.insert(at[v].value);
  }
  at[y.var] = y;
  Atom ap{a.var, fresh_symbol(a.value + "'", used)};

  auto order = topological_order(h);
  std::vector<Estimand> outside, inside;
  for (size_t i = 0; i < order.size(); ++i) {
    const auto& v = order[i];
    bool in = sa.count(v) > 0;
    std::vector<Atom> given;
    for (size_t j = 0; j < i; ++j) {
      const auto& u = order[j];
      given.push_back(u == a.var ? (in ? ap : a) : at[u]);
    }
    Atom self = v == a.var ? ap : at[v];
    (in ? inside : outside).push_back(Estimand::term({self}, given));
  }
  std::vector<Binding> bound;
  for (const auto& v : order)
    if (v != a.var && v != y.var) bound.push_back({v, at[v].value});
  Estimand district = Estimand::sum({{ap.var, ap.value}}, product_of(inside));
  outside.push_back(district);
  return sum_of(bound, product_of(outside));
}

std::vector<Instrument> find_instruments(const Admg& g, const std::string& a, const std::string& y,
                                         int max_conditioning, InstrumentCut cut) {
  check_query(g, a, y);
  Admg cutg = cut == InstrumentCut::Outgoing ? mutilate(g, {}, {a}) : mutilate(g, {a}, {});
  std::vector<Instrument> out;
  for (const auto& i : g.nodes()) {
    if (i == a || i == y) continue;
    std::vector<std::string> rest;
    for (const auto& v : g.nodes())
      if (v != a && v != y && v != i) rest.push_back(v);
    std::vector<NodeSet> zs;
    for (size_t mask = 0; mask < (size_t{1} << rest.size()); ++mask) {
      NodeSet z;
      for (size_t k = 0; k < rest.size(); ++k)
        if (mask >> k & 1) z.insert(rest[k]);
      if (static_cast<int>(z.size()) <= max_conditioning) zs.push_back(z);
    }
    std::sort(zs.begin(), zs.end(), [](const NodeSet& l, const NodeSet& r) {
      return l.size() != r.size() ? l.size() < r.size() : l < r;
    });
    for (const auto& z : zs)
      if (!m_separated(g, {i}, {a}, z) && m_separated(cutg, {i}, {y}, z)) out.push_back({i, z});
  }
  return out;
}

}  // namespace causid
