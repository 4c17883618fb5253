#include <algorithm>
#include <optional>

#include "causid/estimand.hpp"

namespace causid {

namespace {

NodeSet vars(const std::vector<Atom>& v) {
  NodeSet out;
  for (const auto& a : v) out.insert(a.var);
  return out;
}

bool distinct_known(const Admg& g, const std::vector<Atom>& a, const std::vector<Atom>& b) {
  NodeSet seen;
  for (const auto* v : {&a, &b})
    for (const auto& x : *v)
      if (!g.has_node(x.var) || !seen.insert(x.var).second) return false;
  return true;
}

// drop conditioning atoms that are m-separated from the joint given the rest
std::vector<Atom> prune_given(const Admg& g, const std::vector<Atom>& joint, std::vector<Atom> given) {
  if (!distinct_known(g, joint, given)) return given;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < given.size(); ++i) {
      std::vector<Atom> rest = given;
      rest.erase(rest.begin() + static_cast<long>(i));
      if (m_separated(g, vars(joint), {given[i].var}, vars(rest))) {
        given = rest;
        changed = true;
        break;
      }
    }
  }
  return given;
}

std::set<Atom> aset(const std::vector<Atom>& v) { return {v.begin(), v.end()}; }

// P(J1|J2,G) P(J2|G) -> P(J2,J1|G), repeated until one term is left
std::optional<Term> chain_merge(std::vector<Term> ts) {
  while (ts.size() > 1) {
    bool merged = false;
    for (size_t i = 0; i < ts.size() && !merged; ++i) {
      for (size_t j = 0; j < ts.size() && !merged; ++j) {
        if (i == j) continue;
        auto gi = aset(ts[i].given);
        auto rhs = aset(ts[j].joint);
        for (const auto& a : ts[j].given) rhs.insert(a);
        if (gi != rhs) continue;
        bool overlap = false;
        for (const auto& a : ts[i].joint)
          if (rhs.count(a)) overlap = true;
        if (overlap) continue;
        Term t{ts[j].joint, ts[j].given};
        t.joint.insert(t.joint.end(), ts[i].joint.begin(), ts[i].joint.end());
        std::vector<Term> next;
        for (size_t k = 0; k < ts.size(); ++k)
          if (k != i && k != j) next.push_back(ts[k]);
        next.insert(next.begin(), t);
        ts = next;
        merged = true;
      }
    }
    if (!merged) return std::nullopt;
  }
  return ts[0];
}

// One elimination of a bound variable by marginalisation; nullopt when none applies.
std::optional<Estimand> eliminate(const Sum& s, const Admg& g) {
  std::vector<Estimand> factors;
  if (auto p = as<Product>(s.body)) factors = p->factors;
  else factors = {s.body};

  for (size_t bi = 0; bi < s.bound.size(); ++bi) {
    const auto& b = s.bound[bi];
    std::vector<size_t> hit;
    bool ok = true;
    std::vector<Term> terms;
    for (size_t i = 0; i < factors.size(); ++i) {
      if (!free_symbols(factors[i]).count(b.symbol)) continue;
      hit.push_back(i);
      auto t = as<Term>(factors[i]);
      if (!t) {
        ok = false;
        break;
      }
      for (const auto* v : {&t->joint, &t->given})
        for (const auto& a : *v)
          if (a.value == b.symbol && a.var != b.var) ok = false;
      terms.push_back(*t);
    }
    if (!ok || hit.empty()) continue;
    auto m = chain_merge(terms);
    if (!m || !distinct_known(g, m->joint, m->given)) continue;
    Atom target{b.var, b.symbol};
    auto it = std::find(m->joint.begin(), m->joint.end(), target);
    if (it == m->joint.end()) continue;
    bool in_given = false;
    for (const auto& a : m->given)
      if (a.value == b.symbol) in_given = true;
    if (in_given) continue;
    m->joint.erase(it);

    std::vector<Estimand> out;
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i == hit[0] && !m->joint.empty()) out.push_back(Estimand::term(m->joint, m->given));
      if (std::find(hit.begin(), hit.end(), i) == hit.end()) out.push_back(factors[i]);
    }
    std::vector<Binding> bound = s.bound;
    bound.erase(bound.begin() + static_cast<long>(bi));
    return sum_of(bound, product_of(out));
  }
  return std::nullopt;
}

std::vector<Estimand> factors_of(const Estimand& e) {
  if (auto p = as<Product>(e)) return p->factors;
  return {e};
}

// drops factors common to both sides
Estimand cancel(const Estimand& n, const Estimand& d) {
  auto nf = factors_of(n), df = factors_of(d);
  bool changed = false;
  for (size_t i = 0; i < nf.size();) {
    auto it = std::find(df.begin(), df.end(), nf[i]);
    if (it == df.end()) {
      ++i;
      continue;
    }
    df.erase(it);
    nf.erase(nf.begin() + static_cast<long>(i));
    changed = true;
  }
  if (!changed) return Estimand::quotient(n, d);
  Estimand num = product_of(nf), den = product_of(df);
  if (den.is_constant(1.0)) return num;
  return Estimand::quotient(num, den);
}

Estimand step(const Estimand& e, const Admg& g) {
  return std::visit(
      [&](const auto& a) -> Estimand {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Term>) {
          return Estimand::term(a.joint, prune_given(g, a.joint, a.given));
        } else if constexpr (std::is_same_v<T, Expectation>) {
          if (!a.doset.empty() || !g.has_node(a.target)) return e;
          return Estimand::expectation(a.target, prune_given(g, {{a.target, ""}}, a.given));
        } else if constexpr (std::is_same_v<T, Sum>) {
          Estimand body = step(a.body, g);
          Estimand s = sum_of(a.bound, body);
          if (auto ss = as<Sum>(s))
            if (auto r = eliminate(*ss, g)) return *r;
          return s;
        } else if constexpr (std::is_same_v<T, Mean>) {
          Estimand body = step(a.body, g);
          if (auto t = as<Term>(body)) {
            bool plain = t->joint.size() == 1 && t->joint[0] == Atom{a.bound.var, a.bound.symbol};
            for (const auto& x : t->given)
              if (x.value == a.bound.symbol) plain = false;
            if (plain) return Estimand::expectation(a.bound.var, t->given);
          }
          return Estimand::mean(a.bound, body);
        } else if constexpr (std::is_same_v<T, Product>) {
          std::vector<Estimand> f;
          for (const auto& x : a.factors) f.push_back(step(x, g));
          return product_of(f);
        } else if constexpr (std::is_same_v<T, Quotient>) {
          Estimand n = step(a.num, g), d = step(a.den, g);
          if (d.is_constant(1.0)) return n;
          if (n.is_constant(0.0)) return n;
          return cancel(n, d);
        } else if constexpr (std::is_same_v<T, Difference>) {
          Estimand l = step(a.lhs, g), r = step(a.rhs, g);
          if (l == r) return Estimand::constant(0.0);
          return Estimand::difference(l, r);
        } else {
          return e;
        }
      },
      e.node().v);
}

}  // namespace

Estimand simplify(const Estimand& e, const Admg& g) {
  Estimand cur = e;
  for (int i = 0; i < 200; ++i) {
    Estimand next = step(cur, g);
    if (next == cur) break;
    cur = next;
  }
  return cur;
}

}  // namespace causid
