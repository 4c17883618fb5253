#include "causid/scm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"

namespace causid {

using nlohmann::json;

const Variable& DiscreteScm::variable(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return v;
  throw Error(ErrorCode::UnknownNode, name);
}

size_t DiscreteScm::value_index(const std::string& var, const std::string& token) const {
  const auto& d = variable(var).domain;
  auto it = std::find(d.begin(), d.end(), token);
  if (it == d.end()) throw Error(ErrorCode::InvalidArgument, "value '" + token + "' not in domain of " + var);
  return static_cast<size_t>(it - d.begin());
}

namespace {

std::map<std::string, std::string> parse_row_key(const std::string& key) {
  std::map<std::string, std::string> out;
  if (key.empty()) return out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidModel, "bad row key '" + key + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    out[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return out;
}

bool sums_to_one(const std::vector<double>& p, double tol) {
  double s = 0;
  for (double x : p) {
    if (!(x >= 0)) return false;
    s += x;
  }
  return std::fabs(s - 1.0) <= tol;
}

// Dense, index-based view of a model.
struct Compiled {
  struct Parent {
    bool exo;
    int idx;  // topo position for observed, exogenous index otherwise
  };
  std::vector<std::string> order;
  std::map<std::string, int> pos;
  std::vector<int> dom;
  std::vector<std::vector<Parent>> parents;
  std::vector<std::vector<int>> radix;
  std::vector<std::vector<std::vector<double>>> rows;
  std::vector<int> exo_dom;
  std::vector<std::vector<double>> prior;
  std::map<std::string, int> exo_pos;

  explicit Compiled(const DiscreteScm& m) {
    order = topological_order(m.graph);
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    for (size_t i = 0; i < m.exogenous.size(); ++i) {
      exo_pos[m.exogenous[i].name] = static_cast<int>(i);
      exo_dom.push_back(static_cast<int>(m.exogenous[i].domain.size()));
      prior.push_back(m.exogenous[i].prior);
    }
    for (const auto& v : order) {
      const auto& var = m.variable(v);
      dom.push_back(static_cast<int>(var.domain.size()));
      const auto& t = m.tables.at(v);
      std::vector<Parent> ps;
      std::vector<int> rx;
      std::vector<const std::vector<std::string>*> pdoms;
      for (const auto& p : t.parents) {
        if (auto it = exo_pos.find(p); it != exo_pos.end()) {
          ps.push_back({true, it->second});
          pdoms.push_back(&m.exogenous[static_cast<size_t>(it->second)].domain);
        } else {
          ps.push_back({false, pos.at(p)});
          pdoms.push_back(&m.variable(p).domain);
        }
        rx.push_back(static_cast<int>(pdoms.back()->size()));
      }
      size_t nrows = 1;
      for (int r : rx) nrows *= static_cast<size_t>(r);
      std::vector<std::vector<double>> dense(nrows);
      for (const auto& [key, probs] : t.rows) {
        auto kv = parse_row_key(key);
        if (kv.size() != t.parents.size())
          throw Error(ErrorCode::InvalidModel, "row key '" + key + "' of " + v + " does not list every parent");
        size_t idx = 0;
        for (size_t j = 0; j < t.parents.size(); ++j) {
          auto it = kv.find(t.parents[j]);
          if (it == kv.end()) throw Error(ErrorCode::InvalidModel, "row key '" + key + "' misses " + t.parents[j]);
          auto& d = *pdoms[j];
          auto f = std::find(d.begin(), d.end(), it->second);
          if (f == d.end()) throw Error(ErrorCode::InvalidModel, "row key '" + key + "' has bad value");
          idx = idx * static_cast<size_t>(rx[j]) + static_cast<size_t>(f - d.begin());
        }
        dense[idx] = probs;
      }
      for (const auto& r : dense)
        if (r.size() != var.domain.size()) throw Error(ErrorCode::InvalidModel, "missing or short row in table " + v);
      parents.push_back(ps);
      radix.push_back(rx);
      rows.push_back(std::move(dense));
    }
  }
  int n() const { return static_cast<int>(order.size()); }
};

struct Source {
  enum Kind { Mech, Fixed, Copy } kind = Mech;
  int value = 0;
  int world = 0;
  std::vector<int> parent_world;  // per parent; -1 = own world
};

struct WorldSystem {
  std::vector<std::vector<Source>> src;   // [world][topo pos]
  std::vector<std::vector<int>> cond;     // [world][topo pos], -1 none
  WorldSystem(int worlds, int n) : src(static_cast<size_t>(worlds), std::vector<Source>(static_cast<size_t>(n))),
                                   cond(static_cast<size_t>(worlds), std::vector<int>(static_cast<size_t>(n), -1)) {}
  int worlds() const { return static_cast<int>(src.size()); }
};

using Leaf = std::function<void(double, const std::vector<std::vector<int>>&, const std::vector<int>&)>;

void enumerate(const Compiled& c, const WorldSystem& ws, std::uint64_t cap, const Leaf& leaf) {
  const int W = ws.worlds(), n = c.n();
  std::vector<std::vector<int>> vals(static_cast<size_t>(W), std::vector<int>(static_cast<size_t>(n), -1));
  std::vector<int> exo(c.exo_dom.size(), 0);
  std::uint64_t visited = 0;

  std::function<void(int, double)> dfs = [&](int k, double w) {
    if (++visited > cap) throw Error(ErrorCode::DomainTooLarge, "more than " + std::to_string(cap) + " states");
    if (k == n) {
      leaf(w, vals, exo);
      return;
    }
    const size_t K = static_cast<size_t>(k);
    std::vector<int> row_of(static_cast<size_t>(W), -1);
    std::vector<int> rows;  // distinct rows in first-seen order
    for (int wi = 0; wi < W; ++wi) {
      const auto& s = ws.src[static_cast<size_t>(wi)][K];
      if (s.kind != Source::Mech) continue;
      int r = 0;
      const auto& ps = c.parents[K];
      for (size_t j = 0; j < ps.size(); ++j) {
        int v;
        if (ps[j].exo) {
          v = exo[static_cast<size_t>(ps[j].idx)];
        } else {
          int sw = s.parent_world.empty() || s.parent_world[j] < 0 ? wi : s.parent_world[j];
          v = vals[static_cast<size_t>(sw)][static_cast<size_t>(ps[j].idx)];
        }
        r = r * c.radix[K][j] + v;
      }
      auto it = std::find(rows.begin(), rows.end(), r);
      row_of[static_cast<size_t>(wi)] = static_cast<int>(it - rows.begin());
      if (it == rows.end()) rows.push_back(r);
    }
    std::vector<int> out(rows.size(), 0);
    std::function<void(size_t, double)> choose = [&](size_t i, double wt) {
      if (i < rows.size()) {
        const auto& dist = c.rows[K][static_cast<size_t>(rows[i])];
        for (int o = 0; o < c.dom[K]; ++o) {
          double p = dist[static_cast<size_t>(o)];
          if (p == 0.0) continue;
          out[i] = o;
          choose(i + 1, wt * p);
        }
        return;
      }
      for (int wi = 0; wi < W; ++wi) {
        const auto& s = ws.src[static_cast<size_t>(wi)][K];
        auto& slot = vals[static_cast<size_t>(wi)][K];
        if (s.kind == Source::Mech) slot = out[static_cast<size_t>(row_of[static_cast<size_t>(wi)])];
        else if (s.kind == Source::Fixed) slot = s.value;
        else slot = -1;
      }
      for (int pass = 0; pass < W; ++pass)
        for (int wi = 0; wi < W; ++wi) {
          const auto& s = ws.src[static_cast<size_t>(wi)][K];
          if (s.kind == Source::Copy) vals[static_cast<size_t>(wi)][K] = vals[static_cast<size_t>(s.world)][K];
        }
      for (int wi = 0; wi < W; ++wi) {
        int want = ws.cond[static_cast<size_t>(wi)][K];
        if (want >= 0 && vals[static_cast<size_t>(wi)][K] != want) return;
      }
      dfs(k + 1, wt);
    };
    choose(0, w);
  };

  // odometer over exogenous states
  while (true) {
    double w = 1.0;
    for (size_t i = 0; i < exo.size(); ++i) w *= c.prior[i][static_cast<size_t>(exo[i])];
    if (w > 0) dfs(0, w);
    size_t i = 0;
    for (; i < exo.size(); ++i) {
      if (++exo[i] < c.exo_dom[i]) break;
      exo[i] = 0;
    }
    if (i == exo.size()) break;
  }
}

double numeric(const std::string& tok, const std::string& var) {
  try {
    size_t used = 0;
    double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "expectation needs a numeric domain; " + var + " has '" + tok + "'");
}

}  // namespace

// ---- validation and io

void validate(const DiscreteScm& m) {
  NodeSet names;
  for (const auto& v : m.variables) {
    if (!names.insert(v.name).second) throw Error(ErrorCode::DuplicateNode, v.name);
    if (v.domain.empty()) throw Error(ErrorCode::InvalidModel, "empty domain for " + v.name);
  }
  if (names != m.graph.nodes()) throw Error(ErrorCode::InvalidModel, "variables do not match graph nodes");
  std::map<std::string, NodeSet> feeds;
  for (const auto& u : m.exogenous) {
    if (names.count(u.name) || feeds.count(u.name)) throw Error(ErrorCode::DuplicateNode, u.name);
    feeds[u.name];
    if (u.prior.size() != u.domain.size() || !sums_to_one(u.prior, 1e-12))
      throw Error(ErrorCode::InvalidModel, "prior of " + u.name + " must match its domain and sum to 1");
  }
  for (const auto& v : m.variables) {
    auto it = m.tables.find(v.name);
    if (it == m.tables.end()) throw Error(ErrorCode::InvalidModel, "no table for " + v.name);
    NodeSet observed;
    for (const auto& p : it->second.parents) {
      if (feeds.count(p)) feeds[p].insert(v.name);
      else if (names.count(p)) observed.insert(p);
      else throw Error(ErrorCode::UnknownNode, p);
    }
    if (observed != m.graph.parents(v.name))
      throw Error(ErrorCode::InvalidModel, "table parents of " + v.name + " disagree with the graph");
    for (const auto& [key, probs] : it->second.rows)
      if (!sums_to_one(probs, 1e-12)) throw Error(ErrorCode::InvalidModel, "row '" + key + "' of " + v.name + " does not sum to 1");
  }
  std::set<Edge> shared;
  for (const auto& [u, vs] : feeds) {
    if (vs.size() > 2) throw Error(ErrorCode::InvalidModel, "exogenous " + u + " feeds more than two variables");
    if (vs.size() == 2) shared.insert({*vs.begin(), *vs.rbegin()});
  }
  if (shared != m.graph.bidirected())
    throw Error(ErrorCode::InvalidModel, "shared exogenous variables do not match the bidirected edges");
  Compiled check(m);  // row completeness
  (void)check;
}

DiscreteScm model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidModel, e.what());
  }
  try {
    DiscreteScm m;
    std::vector<std::string> nodes;
    for (const auto& v : j.at("variables")) {
      m.variables.push_back({v.at("name").get<std::string>(), v.at("domain").get<std::vector<std::string>>()});
      nodes.push_back(m.variables.back().name);
    }
    if (j.contains("exogenous"))
      for (const auto& u : j.at("exogenous"))
        m.exogenous.push_back({u.at("name").get<std::string>(), u.at("domain").get<std::vector<std::string>>(),
                               u.at("prior").get<std::vector<double>>()});
    std::vector<Edge> d, b;
    const auto& edges = j.at("edges");
    if (edges.contains("directed"))
      for (const auto& e : edges.at("directed")) d.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
    if (edges.contains("bidirected"))
      for (const auto& e : edges.at("bidirected")) b.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
    m.graph = Admg::build(nodes, d, b);
    for (const auto& [name, t] : j.at("tables").items()) {
      Table tab;
      tab.parents = t.at("parents").get<std::vector<std::string>>();
      for (const auto& [key, probs] : t.at("rows").items()) tab.rows[key] = probs.get<std::vector<double>>();
      m.tables[name] = tab;
    }
    validate(m);
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidModel, e.what());
  }
}

std::string model_to_json(const DiscreteScm& m) {
  json j;
  j["variables"] = json::array();
  for (const auto& v : m.variables) j["variables"].push_back({{"name", v.name}, {"domain", v.domain}});
  j["exogenous"] = json::array();
  for (const auto& u : m.exogenous)
    j["exogenous"].push_back({{"name", u.name}, {"domain", u.domain}, {"prior", u.prior}});
  j["edges"]["directed"] = json::array();
  for (const auto& [a, b] : m.graph.directed()) j["edges"]["directed"].push_back({a, b});
  j["edges"]["bidirected"] = json::array();
  for (const auto& [a, b] : m.graph.bidirected()) j["edges"]["bidirected"].push_back({a, b});
  j["tables"] = json::object();
  for (const auto& [name, t] : m.tables) {
    json rows = json::object();
    for (const auto& [k, p] : t.rows) rows[k] = p;
    j["tables"][name] = {{"parents", t.parents}, {"rows", rows}};
  }
  return j.dump(2);
}

DiscreteScm load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

// ---- distributions

Distribution::Distribution(std::vector<Variable> vars, std::vector<double> p) : vars_(std::move(vars)), p_(std::move(p)) {}

int Distribution::index_of(const std::string& var) const {
  for (size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == var) return static_cast<int>(i);
  return -1;
}

size_t Distribution::flat_index(const std::vector<size_t>& values) const {
  size_t idx = 0;
  for (size_t i = 0; i < vars_.size(); ++i) idx = idx * vars_[i].domain.size() + values[i];
  return idx;
}

double Distribution::prob(const std::map<std::string, std::string>& event) const {
  std::vector<int> want(vars_.size(), -1);
  for (const auto& [var, tok] : event) {
    int i = index_of(var);
    if (i < 0) throw Error(ErrorCode::UnknownNode, var);
    const auto& d = vars_[static_cast<size_t>(i)].domain;
    auto it = std::find(d.begin(), d.end(), tok);
    if (it == d.end()) return 0.0;
    want[static_cast<size_t>(i)] = static_cast<int>(it - d.begin());
  }
  double s = 0;
  std::vector<size_t> digits(vars_.size(), 0);
  for (size_t flat = 0; flat < p_.size(); ++flat) {
    size_t r = flat;
    bool ok = true;
    for (size_t i = vars_.size(); i-- > 0;) {
      size_t d = r % vars_[i].domain.size();
      r /= vars_[i].domain.size();
      if (want[i] >= 0 && static_cast<int>(d) != want[i]) ok = false;
    }
    if (ok) s += p_[flat];
  }
  return s;
}

static Distribution accumulate(const DiscreteScm& m, const Compiled& c, const WorldSystem& ws, std::uint64_t cap,
                               bool with_exo) {
  std::vector<Variable> vars = m.variables;
  if (with_exo)
    for (const auto& u : m.exogenous) vars.push_back({u.name, u.domain});
  size_t total = 1;
  for (const auto& v : vars) total *= v.domain.size();
  std::vector<double> p(total, 0.0);
  std::vector<int> tpos;
  for (const auto& v : m.variables) tpos.push_back(c.pos.at(v.name));
  enumerate(c, ws, cap, [&](double w, const std::vector<std::vector<int>>& vals, const std::vector<int>& exo) {
    size_t idx = 0;
    for (size_t i = 0; i < m.variables.size(); ++i)
      idx = idx * m.variables[i].domain.size() + static_cast<size_t>(vals[0][static_cast<size_t>(tpos[i])]);
    if (with_exo)
      for (size_t i = 0; i < m.exogenous.size(); ++i) idx = idx * m.exogenous[i].domain.size() + static_cast<size_t>(exo[i]);
    p[idx] += w;
  });
  return Distribution(vars, p);
}

Distribution joint(const DiscreteScm& m, std::uint64_t cap) {
  Compiled c(m);
  return accumulate(m, c, WorldSystem(1, c.n()), cap, false);
}

Distribution joint_with_exogenous(const DiscreteScm& m, std::uint64_t cap) {
  Compiled c(m);
  return accumulate(m, c, WorldSystem(1, c.n()), cap, true);
}

Distribution intervene(const DiscreteScm& m, const std::map<std::string, std::string>& doset, std::uint64_t cap) {
  Compiled c(m);
  WorldSystem ws(1, c.n());
  for (const auto& [var, tok] : doset) {
    m.graph.require(var);
    auto& s = ws.src[0][static_cast<size_t>(c.pos.at(var))];
    s.kind = Source::Fixed;
    s.value = static_cast<int>(m.value_index(var, tok));
  }
  return accumulate(m, c, ws, cap, false);
}

// ---- counterfactuals

namespace {

struct WorldBuilder {
  const DiscreteScm& m;
  const Compiled& c;
  std::vector<std::string> keys;
  std::vector<std::vector<Source>> srcs;

  int world_for(const std::vector<SubEntry>& sub) {
    std::vector<std::pair<int, Source>> fixed;
    std::string key;
    auto sorted = sub;
    std::sort(sorted.begin(), sorted.end(), [](const SubEntry& a, const SubEntry& b) { return a.var < b.var; });
    for (const auto& e : sorted) {
      m.graph.require(e.var);
      Source s;
      if (e.nested) {
        if (e.nested->var != e.var)
          throw Error(ErrorCode::InvalidArgument, "nested subscript for " + e.var + " names " + e.nested->var);
        s.kind = Source::Copy;
        s.world = world_for(e.nested->subscript);
        key += e.var + "=<" + std::to_string(s.world) + ">;";
      } else {
        s.kind = Source::Fixed;
        s.value = static_cast<int>(m.value_index(e.var, e.value));
        key += e.var + "=" + e.value + ";";
      }
      fixed.push_back({c.pos.at(e.var), s});
    }
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it != keys.end()) return static_cast<int>(it - keys.begin());
    std::vector<Source> row(static_cast<size_t>(c.n()));
    for (const auto& [p, s] : fixed) row[static_cast<size_t>(p)] = s;
    keys.push_back(key);
    srcs.push_back(row);
    return static_cast<int>(keys.size()) - 1;
  }
};

}  // namespace

double ctf_probability(const DiscreteScm& m, const Conjunction& gamma, const Conjunction& delta, std::uint64_t cap) {
  Compiled c(m);
  WorldBuilder wb{m, c, {}, {}};
  struct Cond {
    int world, pos, value;
  };
  auto conds = [&](const Conjunction& conj) {
    std::vector<Cond> out;
    for (const auto& a : conj) {
      int w = wb.world_for(a.subscript);
      out.push_back({w, c.pos.at(a.var), static_cast<int>(m.value_index(a.var, a.value))});
    }
    return out;
  };
  auto g = conds(gamma);
  auto d = conds(delta);
  WorldSystem ws(static_cast<int>(wb.srcs.size()), c.n());
  ws.src = wb.srcs;
  for (const auto& x : d) {
    int& slot = ws.cond[static_cast<size_t>(x.world)][static_cast<size_t>(x.pos)];
    if (slot >= 0 && slot != x.value) throw Error(ErrorCode::ZeroEvidence, "evidence is contradictory");
    slot = x.value;
  }
  double pd = 0, pgd = 0;
  enumerate(c, ws, cap, [&](double w, const std::vector<std::vector<int>>& vals, const std::vector<int>&) {
    pd += w;
    for (const auto& x : g)
      if (vals[static_cast<size_t>(x.world)][static_cast<size_t>(x.pos)] != x.value) return;
    pgd += w;
  });
  if (pd <= 0) throw Error(ErrorCode::ZeroEvidence, "evidence has probability zero");
  return pgd / pd;
}

static std::set<Edge> path_edges(const Admg& g, const std::string& a, const std::string& y, const std::vector<Path>& pi) {
  if (pi.empty()) throw Error(ErrorCode::InvalidArgument, "empty path set");
  auto all = proper_causal_paths(g, a, y);
  std::set<Edge> out;
  for (const auto& p : pi) {
    if (std::find(all.begin(), all.end(), p) == all.end())
      throw Error(ErrorCode::InvalidArgument, "not a causal path from " + a + " to " + y + ": " + format_path(p));
    for (size_t i = 0; i + 1 < p.size(); ++i) out.insert({p[i], p[i + 1]});
  }
  return out;
}

double pse_value(const DiscreteScm& m, const std::string& a, const std::string& y, const std::vector<Path>& pi,
                 const std::string& a1, const std::string& a0, const std::string& yval, std::uint64_t cap) {
  auto edges = path_edges(m.graph, a, y, pi);
  Compiled c(m);
  WorldSystem ws(2, c.n());  // 0 baseline, 1 active
  for (int k = 0; k < c.n(); ++k) {
    const auto& v = c.order[static_cast<size_t>(k)];
    if (v == a) {
      ws.src[0][static_cast<size_t>(k)] = {Source::Fixed, static_cast<int>(m.value_index(a, a0)), 0, {}};
      ws.src[1][static_cast<size_t>(k)] = {Source::Fixed, static_cast<int>(m.value_index(a, a1)), 0, {}};
      continue;
    }
    Source s;
    for (const auto& p : c.parents[static_cast<size_t>(k)]) {
      if (p.exo) {
        s.parent_world.push_back(-1);
        continue;
      }
      bool active = edges.count({c.order[static_cast<size_t>(p.idx)], v}) > 0;
      s.parent_world.push_back(active ? 1 : 0);
    }
    ws.src[1][static_cast<size_t>(k)] = s;
  }
  ws.cond[1][static_cast<size_t>(c.pos.at(y))] = static_cast<int>(m.value_index(y, yval));
  double p = 0;
  enumerate(c, ws, cap, [&](double w, const auto&, const auto&) { p += w; });
  return p;
}

namespace {

double expected_outcome(const DiscreteScm& m, const Compiled& c, const WorldSystem& ws, int world,
                        const std::string& y) {
  const auto& dom = m.variable(y).domain;
  int yp = c.pos.at(y);
  double e = 0;
  enumerate(c, ws, kDefaultStateCap, [&](double w, const std::vector<std::vector<int>>& vals, const std::vector<int>&) {
    e += w * numeric(dom[static_cast<size_t>(vals[static_cast<size_t>(world)][static_cast<size_t>(yp)])], y);
  });
  return e;
}

// E[Y_{outer, M_{inner}}] with M the mediators between a and y.
double nested_mean(const DiscreteScm& m, const std::string& a, const std::string& y, const std::string& outer,
                   const std::string& inner) {
  Compiled c(m);
  NodeSet de = descendants(m.graph, {a}), an = ancestors(m.graph, {y});
  WorldSystem ws(2, c.n());
  int ap = c.pos.at(a);
  ws.src[0][static_cast<size_t>(ap)] = {Source::Fixed, static_cast<int>(m.value_index(a, inner)), 0, {}};
  ws.src[1][static_cast<size_t>(ap)] = {Source::Fixed, static_cast<int>(m.value_index(a, outer)), 0, {}};
  for (const auto& v : de)
    if (an.count(v) && v != a && v != y) ws.src[1][static_cast<size_t>(c.pos.at(v))] = {Source::Copy, 0, 0, {}};
  return expected_outcome(m, c, ws, 1, y);
}

double do_mean(const DiscreteScm& m, const std::string& a, const std::string& y, const std::string& av) {
  Compiled c(m);
  WorldSystem ws(1, c.n());
  ws.src[0][static_cast<size_t>(c.pos.at(a))] = {Source::Fixed, static_cast<int>(m.value_index(a, av)), 0, {}};
  return expected_outcome(m, c, ws, 0, y);
}

}  // namespace

double effect_measure(const DiscreteScm& m, EffectKind kind, const EffectParams& p) {
  const auto& a = p.treatment;
  const auto& y = p.outcome;
  switch (kind) {
    case EffectKind::TV: {
      auto d = joint(m);
      auto cond = [&](const std::string& av) {
        double pa = d.prob({{a, av}});
        if (pa <= 0) throw Error(ErrorCode::ZeroEvidence, a + "=" + av);
        return d.prob({{a, av}, {y, p.y}}) / pa;
      };
      return cond(p.a1) - cond(p.a0);
    }
    case EffectKind::TE:
      return intervene(m, {{a, p.a1}}).prob({{y, p.y}}) - intervene(m, {{a, p.a0}}).prob({{y, p.y}});
    case EffectKind::NDE:
      return nested_mean(m, a, y, p.a1, p.a0) - do_mean(m, a, y, p.a0);
    case EffectKind::NIE:
      return nested_mean(m, a, y, p.a0, p.a1) - do_mean(m, a, y, p.a0);
    case EffectKind::PSE:
      return pse_value(m, a, y, p.pi, p.a1, p.a0, p.y) - intervene(m, {{a, p.a0}}).prob({{y, p.y}});
  }
  return 0;
}

// ---- random models

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(d);
  double s = 0;
  for (auto& x : w) {
    x = u(rng) + 1e-9;
    s += x;
  }
  const double floor = 0.01;
  for (auto& x : w) x = floor + (1.0 - floor * static_cast<double>(d)) * x / s;
  // renormalise away rounding so rows pass the 1e-12 check
  double t = 0;
  for (double x : w) t += x;
  w.back() += 1.0 - t;
  return w;
}

std::vector<std::string> tokens(int d) {
  std::vector<std::string> out;
  for (int i = 0; i < d; ++i) out.push_back(std::to_string(i));
  return out;
}

DiscreteScm random_with(const Admg& g, std::uint64_t seed, const std::function<int(std::mt19937_64&)>& size_of) {
  std::mt19937_64 rng(seed);
  DiscreteScm m;
  m.graph = g;
  for (const auto& v : g.nodes()) m.variables.push_back({v, tokens(size_of(rng))});
  std::map<std::string, std::vector<std::string>> exo_of;
  for (const auto& [a, b] : g.bidirected()) {
    std::string name = "U_" + a + "_" + b;
    int d = 2;
    m.exogenous.push_back({name, tokens(d), random_simplex(rng, static_cast<size_t>(d))});
    exo_of[a].push_back(name);
    exo_of[b].push_back(name);
  }
  for (const auto& v : m.variables) {
    Table t;
    t.parents.assign(g.parents(v.name).begin(), g.parents(v.name).end());
    for (const auto& u : exo_of[v.name]) t.parents.push_back(u);
    std::vector<const std::vector<std::string>*> doms;
    for (const auto& p : t.parents) {
      if (g.has_node(p)) doms.push_back(&m.variable(p).domain);
      else
        for (const auto& u : m.exogenous)
          if (u.name == p) doms.push_back(&u.domain);
    }
    size_t nrows = 1;
    for (const auto* d : doms) nrows *= d->size();
    for (size_t r = 0; r < nrows; ++r) {
      std::vector<size_t> digit(t.parents.size());
      size_t rest = r;
      for (size_t j = t.parents.size(); j-- > 0;) {
        digit[j] = rest % doms[j]->size();
        rest /= doms[j]->size();
      }
      std::string key;
      for (size_t j = 0; j < t.parents.size(); ++j) key += (j ? "," : "") + t.parents[j] + "=" + (*doms[j])[digit[j]];
      t.rows[key] = random_simplex(rng, v.domain.size());
    }
    m.tables[v.name] = t;
  }
  validate(m);
  return m;
}

}  // namespace

DiscreteScm random_scm(const Admg& g, std::uint64_t seed, int domain_size) {
  if (domain_size < 2) throw Error(ErrorCode::InvalidArgument, "domain_size must be at least 2");
  return random_with(g, seed, [&](std::mt19937_64&) { return domain_size; });
}

DiscreteScm random_scm_mixed(const Admg& g, std::uint64_t seed, int max_domain) {
  if (max_domain < 2) throw Error(ErrorCode::InvalidArgument, "max_domain must be at least 2");
  return random_with(g, seed, [&](std::mt19937_64& rng) {
    return std::uniform_int_distribution<int>(2, max_domain)(rng);
  });
}

}  // namespace causid
