#include "causid/counterfactual.hpp"

#include <algorithm>
#include <cctype>

namespace causid {

std::string copy_name(const std::string& var, const World& w) {
  if (w.empty()) return var;
  std::string s = var + "@{";
  bool first = true;
  for (const auto& [k, v] : w) {
    s += (first ? "" : ",") + k + "=" + v;
    first = false;
  }
  return s + "}";
}

namespace {

World world_of(const CtfAtom& a) {
  World w;
  for (const auto& e : a.subscript) {
    if (e.nested) throw Error(ErrorCode::InvalidArgument, "nested subscript in " + render_ctf(a) + "; unnest first");
    auto [it, fresh] = w.emplace(e.var, e.value);
    if (!fresh && it->second != e.value)
      throw Error(ErrorCode::InconsistentQuery, "conflicting subscript values for " + e.var);
  }
  return w;
}

struct UnionFind {
  std::map<std::string, std::string> up;
  std::string find(const std::string& x) {
    auto it = up.find(x);
    if (it == up.end() || it->second == x) return x;
    return it->second = find(it->second);
  }
};

}  // namespace

CgResult make_cg(const Admg& g, const Conjunction& q) {
  CgResult out;
  WorldGraph& wg = out.wg;
  wg.base = g;

  std::vector<World> worlds;
  for (const auto& a : q) {
    g.require(a.var);
    World w = world_of(a);
    for (const auto& [k, v] : w) g.require(k);
    if (std::find(worlds.begin(), worlds.end(), w) == worlds.end()) worlds.push_back(w);
  }
  std::sort(worlds.begin(), worlds.end(), [](const World& l, const World& r) {
    if (l.empty() != r.empty()) return l.empty();
    return copy_name("", l) < copy_name("", r);
  });
  wg.worlds = worlds;

  // observed values, keyed by copy
  std::map<std::string, std::string> observed;
  for (const auto& a : q) {
    std::string c = copy_name(a.var, world_of(a));
    auto [it, fresh] = observed.emplace(c, a.value);
    if (!fresh && it->second != a.value) out.inconsistent = true;
  }

  UnionFind uf;
  std::map<std::string, std::string> value;  // representative -> known value
  auto note = [&](const std::string& c, const std::string& v) {
    auto [it, fresh] = value.emplace(uf.find(c), v);
    if (!fresh && it->second != v) out.inconsistent = true;
  };
  for (const auto& w : worlds)
    for (const auto& v : g.nodes()) {
      std::string c = copy_name(v, w);
      uf.up[c] = c;
      if (w.count(v)) note(c, w.at(v));
    }
  for (const auto& [c, v] : observed) note(c, v);

  auto val = [&](const std::string& c) -> const std::string* {
    auto it = value.find(uf.find(c));
    return it == value.end() ? nullptr : &it->second;
  };

  for (const auto& v : topological_order(g)) {
    for (size_t i = 0; i < worlds.size(); ++i)
      for (size_t j = i + 1; j < worlds.size(); ++j) {
        const World &wi = worlds[i], &wj = worlds[j];
        std::string ci = copy_name(v, wi), cj = copy_name(v, wj);
        std::string ri = uf.find(ci), rj = uf.find(cj);
        if (ri == rj) continue;
        bool ii = wi.count(v) > 0, ij = wj.count(v) > 0;
        bool merge = false;
        if (ii && ij) {
          merge = wi.at(v) == wj.at(v);
        } else if (!ii && !ij) {
          merge = true;
          for (const auto& p : g.parents(v)) {
            std::string pi = copy_name(p, wi), pj = copy_name(p, wj);
            if (uf.find(pi) == uf.find(pj)) continue;
            const std::string *vi = val(pi), *vj = val(pj);
            if (!(vi && vj && *vi == *vj)) {
              merge = false;
              break;
            }
          }
        }
        if (!merge) continue;
        const std::string* vj = val(rj);
        std::string carried = vj ? *vj : "";
        uf.up[rj] = ri;
        if (!carried.empty()) note(ri, carried);
      }
  }

  // canonical nodes and edges
  std::vector<std::string> names;
  std::vector<Edge> directed, bidirected;
  for (const auto& w : worlds)
    for (const auto& v : g.nodes()) {
      std::string c = copy_name(v, w);
      std::string r = uf.find(c);
      wg.merged[c] = r;
      if (r != c) continue;
      CgNode n;
      n.var = v;
      n.world = w;
      n.intervened = w.count(v) > 0;
      if (auto pv = val(c)) n.value = *pv;
      wg.nodes[c] = n;
      names.push_back(c);
      if (n.intervened) continue;
      for (const auto& p : g.parents(v)) directed.push_back({uf.find(copy_name(p, w)), c});
    }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());
  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j) {
      const CgNode &a = wg.nodes[names[i]], &b = wg.nodes[names[j]];
      if (a.intervened || b.intervened) continue;
      if (a.var == b.var || g.has_bidirected(a.var, b.var)) bidirected.push_back({names[i], names[j]});
    }
  wg.graph = Admg::build(names, directed, bidirected);

  NodeSet targets;
  for (const auto& a : q) {
    std::string r = uf.find(copy_name(a.var, world_of(a)));
    targets.insert(r);
    bool dup = false;
    for (const auto& [n, v] : out.query)
      if (n == r) dup = true;
    if (!dup) out.query.push_back({r, a.value});
  }
  wg.restricted = induced(wg.graph, ancestors(wg.graph, targets));
  return out;
}

namespace {

struct Ctx {
  const Admg& g;
  IdentifyOptions inner;
  std::set<std::string> used;
};

std::string symbol_base(const std::string& var) {
  std::string s;
  for (char c : var) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Replaces nested subscripts by fresh symbols. New atoms are appended and the
// fresh symbols are recorded in `bind`.
void unnest(const CtfAtom& a, Conjunction& out, std::vector<Binding>& bind, std::set<std::string>& used) {
  CtfAtom flat{a.var, a.value, {}};
  for (const auto& e : a.subscript) {
    if (!e.nested) {
      flat.subscript.push_back(e);
      continue;
    }
    std::string s = fresh_symbol(symbol_base(e.var), used);
    used.insert(s);
    bind.push_back({e.var, s});
    CtfAtom inner = *e.nested;
    inner.value = s;
    unnest(inner, out, bind, used);
    flat.subscript.push_back({e.var, s, nullptr});
  }
  out.push_back(flat);
}

void collect_symbols(const CtfAtom& a, std::set<std::string>& used) {
  if (!a.value.empty()) used.insert(a.value);
  for (const auto& e : a.subscript) {
    if (!e.value.empty()) used.insert(e.value);
    if (e.nested) collect_symbols(*e.nested, used);
  }
}

std::vector<std::string> sorted_nodes(const Admg& g, const NodeSet& s) {
  std::vector<std::string> out;
  for (const auto& v : topological_order(g))
    if (s.count(v)) out.push_back(v);
  return out;
}

IdentResult idstar(const Conjunction& in, Ctx& ctx) {
  if (in.empty()) return IdentResult::ok(Estimand::constant(1.0));

  // an atom subscripted by its own variable is either trivially true or impossible
  Conjunction q;
  for (const auto& a : in) {
    const SubEntry* self = nullptr;
    for (const auto& e : a.subscript)
      if (e.var == a.var) self = &e;
    if (!self) {
      q.push_back(a);
      continue;
    }
    if (self->value != a.value) return IdentResult::ok(Estimand::constant(0.0));
  }
  if (q.empty()) return IdentResult::ok(Estimand::constant(1.0));

  CgResult cg = make_cg(ctx.g, q);
  if (cg.inconsistent) return IdentResult::ok(Estimand::constant(0.0));
  const WorldGraph& wg = cg.wg;
  const Admg& h = wg.restricted;

  std::map<std::string, std::string> val;  // canonical node -> symbol
  for (const auto& [n, v] : cg.query) val[n] = v;
  NodeSet live;
  std::vector<Binding> bound;
  for (const auto& n : sorted_nodes(h, h.nodes())) {
    const CgNode& c = wg.nodes.at(n);
    if (c.intervened) {
      val[n] = c.value;
      continue;
    }
    live.insert(n);
    if (!val.count(n)) {
      std::string s = fresh_symbol(symbol_base(c.var), ctx.used);
      ctx.used.insert(s);
      val[n] = s;
      bound.push_back({c.var, s});
    }
  }

  auto districts = c_components(induced(h, live));
  if (districts.size() > 1) {
    // order districts by the topological position of their first member
    auto order = topological_order(h);
    auto pos = [&](const NodeSet& d) {
      for (size_t i = 0; i < order.size(); ++i)
        if (d.count(order[i])) return i;
      return order.size();
    };
    std::stable_sort(districts.begin(), districts.end(),
                     [&](const NodeSet& a, const NodeSet& b) { return pos(a) < pos(b); });
    std::vector<Estimand> fs;
    for (const auto& d : districts) {
      Conjunction sub;
      for (const auto& n : sorted_nodes(h, d)) {
        CtfAtom a{wg.nodes.at(n).var, val.at(n), {}};
        std::map<std::string, std::string> pa;
        for (const auto& p : h.parents(n)) pa[wg.nodes.at(p).var] = val.at(p);
        for (const auto& [k, v] : pa) a.subscript.push_back({k, v, nullptr});
        sub.push_back(a);
      }
      IdentResult r = idstar(sub, ctx);
      if (!r.identifiable()) return r;
      fs.push_back(*r.estimand);
    }
    return IdentResult::ok(sum_of(bound, product_of(fs)));
  }

  const NodeSet& s = districts.front();
  std::vector<std::string> names = sorted_nodes(h, s);
  std::map<std::string, std::string> ev, sub;
  for (const auto& n : names) {
    const CgNode& c = wg.nodes.at(n);
    auto [it, fresh] = ev.emplace(c.var, val.at(n));
    if (!fresh && it->second != val.at(n))
      return IdentResult::fail(CtfWitness{names, c.var + " takes values " + it->second + " and " + val.at(n)});
  }
  for (const auto& [n, c] : wg.nodes) {
    if (!c.intervened || !h.has_node(n)) continue;
    auto [it, fresh] = sub.emplace(c.var, c.value);
    if (!fresh && it->second != c.value)
      return IdentResult::fail(CtfWitness{names, c.var + " is set to " + it->second + " and " + c.value});
  }
  for (auto it = sub.begin(); it != sub.end();) {
    auto e = ev.find(it->first);
    if (e == ev.end()) {
      ++it;
      continue;
    }
    if (e->second != it->second)
      return IdentResult::fail(
          CtfWitness{names, it->first + " is set to " + it->second + " but observed as " + e->second});
    it = sub.erase(it);
  }
  std::vector<Atom> xs, ys;
  for (const auto& [k, v] : sub) xs.push_back({k, v});
  for (const auto& [k, v] : ev) ys.push_back({k, v});
  IdentResult r = identify_atoms(ctx.g, xs, ys, ctx.inner);
  if (!r.identifiable())
    return IdentResult::fail(CtfWitness{names, "not identifiable: " + render_witness(*r.witness)});
  return IdentResult::ok(sum_of(bound, *r.estimand));
}

IdentResult run_idstar(const Admg& g, const Conjunction& gamma, std::set<std::string> used,
                       const IdentifyOptions& opt) {
  Ctx ctx{g, opt, std::move(used)};
  ctx.inner.simplify = false;
  Conjunction flat;
  std::vector<Binding> bind;
  for (const auto& a : gamma) unnest(a, flat, bind, ctx.used);
  IdentResult r = idstar(flat, ctx);
  if (!r.identifiable()) return r;
  return IdentResult::ok(sum_of(bind, *r.estimand));
}

Estimand tidy(const Estimand& e, const Admg& g, const IdentifyOptions& opt) {
  Estimand out = hygienic(e);
  if (opt.simplify) out = hygienic(simplify(out, g));
  return out;
}

bool plain(const Conjunction& c) {
  for (const auto& a : c)
    if (!a.subscript.empty()) return false;
  return true;
}

}  // namespace

IdentResult identify_ctf(const Admg& g, const Conjunction& gamma, const IdentifyOptions& opt) {
  if (gamma.empty()) throw Error(ErrorCode::InvalidArgument, "empty counterfactual conjunction");
  std::set<std::string> used;
  for (const auto& a : gamma) collect_symbols(a, used);
  IdentResult r = run_idstar(g, gamma, used, opt);
  if (r.identifiable()) r.estimand = tidy(*r.estimand, g, opt);
  return r;
}

IdentResult identify_ctf_conditional(const Admg& g, const Conjunction& gamma, const Conjunction& delta,
                                     const IdentifyOptions& opt) {
  if (delta.empty()) return identify_ctf(g, gamma, opt);
  if (gamma.empty()) throw Error(ErrorCode::InvalidArgument, "empty counterfactual conjunction");
  std::set<std::string> used;
  for (const auto* c : {&gamma, &delta})
    for (const auto& a : *c) collect_symbols(a, used);
  Conjunction both = gamma;
  both.insert(both.end(), delta.begin(), delta.end());
  IdentResult num = run_idstar(g, both, used, opt);
  if (!num.identifiable()) return num;
  Estimand den;
  if (plain(delta)) {
    std::vector<Atom> atoms;
    for (const auto& a : delta) atoms.push_back({a.var, a.value});
    std::sort(atoms.begin(), atoms.end());
    den = Estimand::term(atoms);
  } else {
    IdentResult d = run_idstar(g, delta, used, opt);
    if (!d.identifiable()) return d;
    den = *d.estimand;
  }
  if (den.is_constant(0.0)) throw Error(ErrorCode::ZeroEvidence, "conditioning event is impossible");
  return IdentResult::ok(tidy(Estimand::quotient(*num.estimand, den), g, opt));
}

}  // namespace causid
