#pragma once

// Brute-force reference used only by the tests, written separately from the
// library enumeration. Counterfactuals turn every stochastic table into
// deterministic response functions through one uniform per variable (inverse
// CDF), so the coupling differs from the library's on purpose. Identifiable
// quantities must not care.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causid/query.hpp"
#include "causid/scm.hpp"

namespace oracle {

using causid::Conjunction;
using causid::CtfAtom;
using causid::DiscreteScm;
using Assign = std::map<std::string, std::string>;

inline std::vector<std::string> domain_of(const DiscreteScm& m, const std::string& name) {
  for (const auto& v : m.variables)
    if (v.name == name) return v.domain;
  for (const auto& u : m.exogenous)
    if (u.name == name) return u.domain;
  throw std::runtime_error("oracle: unknown " + name);
}

inline std::string row_key(const causid::Table& t, const Assign& vals) {
  std::string k;
  for (size_t i = 0; i < t.parents.size(); ++i) k += (i ? "," : "") + t.parents[i] + "=" + vals.at(t.parents[i]);
  return k;
}

// Calls f(assignment, weight) for every full assignment of the listed names.
inline void each_assignment(const DiscreteScm& m, const std::vector<std::string>& names,
                            const std::function<void(const Assign&)>& f) {
  Assign cur;
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == names.size()) {
      f(cur);
      return;
    }
    for (const auto& t : domain_of(m, names[i])) {
      cur[names[i]] = t;
      go(i + 1);
    }
  };
  go(0);
}

inline std::vector<std::string> topo(const DiscreteScm& m) {
  std::vector<std::string> out;
  std::set<std::string> done;
  while (out.size() < m.variables.size()) {
    for (const auto& v : m.variables) {
      if (done.count(v.name)) continue;
      bool ready = true;
      for (const auto& p : m.tables.at(v.name).parents)
        if (m.graph.has_node(p) && !done.count(p)) ready = false;
      if (ready) {
        out.push_back(v.name);
        done.insert(v.name);
      }
    }
  }
  return out;
}

inline double prior_of(const DiscreteScm& m, const Assign& u) {
  double w = 1;
  for (const auto& e : m.exogenous) {
    auto it = std::find(e.domain.begin(), e.domain.end(), u.at(e.name));
    w *= e.prior[static_cast<size_t>(it - e.domain.begin())];
  }
  return w;
}

inline std::vector<std::string> exo_names(const DiscreteScm& m) {
  std::vector<std::string> out;
  for (const auto& e : m.exogenous) out.push_back(e.name);
  return out;
}

// P(event | do(doset)) by truncated factorisation over exogenous states.
inline double interventional(const DiscreteScm& m, const Assign& doset, const Assign& event) {
  auto order = topo(m);
  double total = 0;
  each_assignment(m, exo_names(m), [&](const Assign& u) {
    double pu = prior_of(m, u);
    if (pu == 0) return;
    Assign cur = u;
    std::function<void(size_t, double)> go = [&](size_t i, double w) {
      if (w == 0) return;
      if (i == order.size()) {
        for (const auto& [k, v] : event)
          if (cur.at(k) != v) return;
        total += w;
        return;
      }
      const auto& v = order[i];
      if (auto it = doset.find(v); it != doset.end()) {
        cur[v] = it->second;
        go(i + 1, w);
        return;
      }
      const auto& t = m.tables.at(v);
      const auto& row = t.rows.at(row_key(t, cur));
      auto dom = domain_of(m, v);
      for (size_t k = 0; k < dom.size(); ++k) {
        cur[v] = dom[k];
        go(i + 1, w * row[k]);
      }
    };
    go(0, pu);
  });
  return total;
}

// One deterministic unit: exogenous values plus one uniform draw per variable,
// represented by the midpoint of a cell of the merged row CDFs.
struct Unit {
  Assign u;
  std::map<std::string, double> eps;
  double weight;
};

inline std::vector<double> cuts(const causid::Table& t) {
  std::set<double> c{0.0, 1.0};
  for (const auto& [k, row] : t.rows) {
    double s = 0;
    for (size_t i = 0; i + 1 < row.size(); ++i) c.insert(std::min(1.0, s += row[i]));
  }
  return {c.begin(), c.end()};
}

inline void each_unit(const DiscreteScm& m, const std::function<void(const Unit&)>& f) {
  auto order = topo(m);
  std::vector<std::vector<double>> cs;
  for (const auto& v : order) cs.push_back(cuts(m.tables.at(v)));
  each_assignment(m, exo_names(m), [&](const Assign& u) {
    double pu = prior_of(m, u);
    if (pu == 0) return;
    Unit cur{u, {}, pu};
    std::function<void(size_t, double)> go = [&](size_t i, double w) {
      if (w <= 0) return;
      if (i == order.size()) {
        cur.weight = w;
        f(cur);
        return;
      }
      for (size_t k = 0; k + 1 < cs[i].size(); ++k) {
        double len = cs[i][k + 1] - cs[i][k];
        if (len <= 0) continue;
        cur.eps[order[i]] = (cs[i][k] + cs[i][k + 1]) / 2;
        go(i + 1, w * len);
      }
    };
    go(0, pu);
  });
}

struct World {
  const DiscreteScm& m;
  const Unit& unit;
  Assign doset;
  Assign memo;

  std::string value(const std::string& v) {
    if (auto it = doset.find(v); it != doset.end()) return it->second;
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    const auto& t = m.tables.at(v);
    Assign pv;
    for (const auto& p : t.parents) pv[p] = m.graph.has_node(p) ? value(p) : unit.u.at(p);
    const auto& row = t.rows.at(row_key(t, pv));
    auto dom = domain_of(m, v);
    double s = 0, e = unit.eps.at(v);
    std::string out = dom.back();
    for (size_t k = 0; k < row.size(); ++k) {
      s += row[k];
      if (e < s) {
        out = dom[k];
        break;
      }
    }
    return memo[v] = out;
  }
};

inline std::string atom_value(const DiscreteScm& m, const Unit& unit, const CtfAtom& a) {
  Assign doset;
  for (const auto& e : a.subscript) doset[e.var] = e.nested ? atom_value(m, unit, *e.nested) : e.value;
  World w{m, unit, doset, {}};
  return w.value(a.var);
}

inline bool holds(const DiscreteScm& m, const Unit& unit, const Conjunction& c) {
  for (const auto& a : c)
    if (atom_value(m, unit, a) != a.value) return false;
  return true;
}

inline double ctf(const DiscreteScm& m, const Conjunction& gamma, const Conjunction& delta = {}) {
  double num = 0, den = 0;
  each_unit(m, [&](const Unit& unit) {
    if (!holds(m, unit, delta)) return;
    den += unit.weight;
    if (holds(m, unit, gamma)) num += unit.weight;
  });
  return num / den;
}

// Numeric mean of an atom's value (value field ignored).
inline double mean(const DiscreteScm& m, const CtfAtom& a) {
  double s = 0;
  each_unit(m, [&](const Unit& unit) { s += unit.weight * std::stod(atom_value(m, unit, a)); });
  return s;
}

// Edge-based path-specific term: every node carries an active and a baseline
// value; an edge on some listed path passes the active value, any other edge the
// baseline one. a itself is a1 when active and a0 as baseline. Forward pass over
// value pairs: a node whose two parent rows coincide draws once, otherwise the two
// draws are independent.
inline double pse(const DiscreteScm& m, const std::string& a, const std::string& y,
                  const std::set<std::pair<std::string, std::string>>& active, const std::string& a1,
                  const std::string& a0, const std::string& yval) {
  auto order = topo(m);
  double total = 0;
  each_assignment(m, exo_names(m), [&](const Assign& u) {
    double pu = prior_of(m, u);
    if (pu == 0) return;
    Assign act = u, base = u;
    std::function<void(size_t, double)> go = [&](size_t i, double w) {
      if (w == 0) return;
      if (i == order.size()) {
        if (act.at(y) == yval) total += w;
        return;
      }
      const auto& v = order[i];
      if (v == a) {
        act[v] = a1;
        base[v] = a0;
        go(i + 1, w);
        return;
      }
      const auto& t = m.tables.at(v);
      Assign pa_act, pa_base;
      for (const auto& p : t.parents) {
        pa_base[p] = base.at(p);
        pa_act[p] = active.count({p, v}) ? act.at(p) : base.at(p);
      }
      const auto& rb = t.rows.at(row_key(t, pa_base));
      const auto& ra = t.rows.at(row_key(t, pa_act));
      auto dom = domain_of(m, v);
      for (size_t kb = 0; kb < dom.size(); ++kb) {
        base[v] = dom[kb];
        if (pa_act == pa_base) {
          act[v] = dom[kb];
          go(i + 1, w * rb[kb]);
          continue;
        }
        for (size_t ka = 0; ka < dom.size(); ++ka) {
          act[v] = dom[ka];
          go(i + 1, w * rb[kb] * ra[ka]);
        }
      }
    };
    go(0, pu);
  });
  return total;
}

}  // namespace oracle
