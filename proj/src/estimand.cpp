#include "causid/estimand.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>

#include "json.hpp"

namespace causid {

namespace {

Estimand make(auto&& alt) {
  return Estimand(std::make_shared<const Node>(Node{std::forward<decltype(alt)>(alt)}));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip_primes(std::string s) {
  while (!s.empty() && s.back() == '\'') s.pop_back();
  return s;
}

std::string strip_digits(std::string s) {
  while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

Estimand::Estimand() : Estimand(make(Constant{1.0})) {}

Estimand Estimand::term(std::vector<Atom> joint, std::vector<Atom> given) {
  return make(Term{std::move(joint), std::move(given)});
}
Estimand Estimand::do_term(std::vector<Atom> joint, std::vector<Atom> doset, std::vector<Atom> given) {
  return make(DoTerm{std::move(joint), std::move(doset), std::move(given)});
}
Estimand Estimand::sum(std::vector<Binding> bound, Estimand body) {
  return make(Sum{std::move(bound), std::move(body)});
}
Estimand Estimand::product(std::vector<Estimand> factors) { return make(Product{std::move(factors)}); }
Estimand Estimand::quotient(Estimand num, Estimand den) {
  return make(Quotient{std::move(num), std::move(den)});
}
Estimand Estimand::difference(Estimand lhs, Estimand rhs) {
  return make(Difference{std::move(lhs), std::move(rhs)});
}
Estimand Estimand::expectation(std::string target, std::vector<Atom> given, std::vector<Atom> doset) {
  return make(Expectation{std::move(target), std::move(given), std::move(doset)});
}
Estimand Estimand::mean(Binding b, Estimand body) { return make(Mean{std::move(b), std::move(body)}); }
Estimand Estimand::constant(double v) { return make(Constant{v}); }

Estimand::Kind Estimand::kind() const { return static_cast<Kind>(n_->v.index()); }

bool Estimand::is_constant(double v) const {
  auto c = as<Constant>(*this);
  return c && c->value == v;
}

bool Estimand::operator==(const Estimand& o) const {
  if (n_ == o.n_) return true;
  if (n_->v.index() != o.n_->v.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const T& b = std::get<T>(o.n_->v);
        if constexpr (std::is_same_v<T, Term>) return a.joint == b.joint && a.given == b.given;
        else if constexpr (std::is_same_v<T, DoTerm>)
          return a.joint == b.joint && a.doset == b.doset && a.given == b.given;
        else if constexpr (std::is_same_v<T, Sum>) return a.bound == b.bound && a.body == b.body;
        else if constexpr (std::is_same_v<T, Product>) return a.factors == b.factors;
        else if constexpr (std::is_same_v<T, Quotient>) return a.num == b.num && a.den == b.den;
        else if constexpr (std::is_same_v<T, Difference>) return a.lhs == b.lhs && a.rhs == b.rhs;
        else if constexpr (std::is_same_v<T, Expectation>)
          return a.target == b.target && a.given == b.given && a.doset == b.doset;
        else if constexpr (std::is_same_v<T, Mean>) return a.bound == b.bound && a.body == b.body;
        else return a.value == b.value;
      },
      n_->v);
}

// ---- symbols

bool symbol_belongs(const std::string& symbol, const std::string& var) {
  std::string s = lower(strip_primes(symbol));
  std::string v = lower(var);
  if (s.empty()) return false;
  if (s == v) return true;
  std::string d = strip_digits(s);
  return d != s && d == v && strip_digits(v) == v;
}

std::string resolve_symbol(const std::string& symbol, const NodeSet& nodes) {
  std::string s = lower(strip_primes(symbol));
  if (s.empty()) return "";
  auto find = [&](const std::string& key) {
    std::string hit;
    int n = 0;
    for (const auto& v : nodes)
      if (lower(v) == key) {
        hit = v;
        ++n;
      }
    return n == 1 ? hit : std::string();
  };
  if (auto h = find(s); !h.empty()) return h;
  std::string d = strip_digits(s);
  if (d != s && !d.empty()) {
    auto h = find(d);
    if (!h.empty() && strip_digits(h) == h) return h;
  }
  return "";
}

std::string fresh_symbol(const std::string& base, const std::set<std::string>& used) {
  std::string s = base;
  while (used.count(s)) s += "'";
  return s;
}

static void collect_symbols(const Estimand& e, std::set<std::string>& out, bool free_only) {
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        auto atoms = [&](const std::vector<Atom>& v) {
          for (const auto& x : v) out.insert(x.value);
        };
        if constexpr (std::is_same_v<T, Term>) {
          atoms(a.joint);
          atoms(a.given);
        } else if constexpr (std::is_same_v<T, DoTerm>) {
          atoms(a.joint);
          atoms(a.doset);
          atoms(a.given);
        } else if constexpr (std::is_same_v<T, Expectation>) {
          atoms(a.given);
          atoms(a.doset);
        } else if constexpr (std::is_same_v<T, Sum> || std::is_same_v<T, Mean>) {
          std::set<std::string> inner;
          collect_symbols(a.body, inner, free_only);
          std::vector<Binding> bs;
          if constexpr (std::is_same_v<T, Sum>) bs = a.bound;
          else bs = {a.bound};
          for (const auto& b : bs) {
            if (free_only) inner.erase(b.symbol);
            else inner.insert(b.symbol);
          }
          out.insert(inner.begin(), inner.end());
        } else if constexpr (std::is_same_v<T, Product>) {
          for (const auto& f : a.factors) collect_symbols(f, out, free_only);
        } else if constexpr (std::is_same_v<T, Quotient>) {
          collect_symbols(a.num, out, free_only);
          collect_symbols(a.den, out, free_only);
        } else if constexpr (std::is_same_v<T, Difference>) {
          collect_symbols(a.lhs, out, free_only);
          collect_symbols(a.rhs, out, free_only);
        }
      },
      e.node().v);
}

std::set<std::string> free_symbols(const Estimand& e) {
  std::set<std::string> out;
  collect_symbols(e, out, true);
  return out;
}

std::set<std::string> all_symbols(const Estimand& e) {
  std::set<std::string> out;
  collect_symbols(e, out, false);
  return out;
}

std::set<std::string> variables_of(const Estimand& e) {
  std::set<std::string> out;
  std::function<void(const Estimand&)> go = [&](const Estimand& x) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          auto atoms = [&](const std::vector<Atom>& v) {
            for (const auto& t : v) out.insert(t.var);
          };
          if constexpr (std::is_same_v<T, Term>) {
            atoms(a.joint);
            atoms(a.given);
          } else if constexpr (std::is_same_v<T, DoTerm>) {
            atoms(a.joint);
            atoms(a.doset);
            atoms(a.given);
          } else if constexpr (std::is_same_v<T, Expectation>) {
            out.insert(a.target);
            atoms(a.given);
            atoms(a.doset);
          } else if constexpr (std::is_same_v<T, Sum>) {
            for (const auto& b : a.bound) out.insert(b.var);
            go(a.body);
          } else if constexpr (std::is_same_v<T, Mean>) {
            out.insert(a.bound.var);
            go(a.body);
          } else if constexpr (std::is_same_v<T, Product>) {
            for (const auto& f : a.factors) go(f);
          } else if constexpr (std::is_same_v<T, Quotient>) {
            go(a.num);
            go(a.den);
          } else if constexpr (std::is_same_v<T, Difference>) {
            go(a.lhs);
            go(a.rhs);
          }
        },
        x.node().v);
  };
  go(e);
  return out;
}

bool contains_do(const Estimand& e) {
  bool found = false;
  std::function<void(const Estimand&)> go = [&](const Estimand& x) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, DoTerm>) found = true;
          else if constexpr (std::is_same_v<T, Expectation>) found = found || !a.doset.empty();
          else if constexpr (std::is_same_v<T, Sum> || std::is_same_v<T, Mean>) go(a.body);
          else if constexpr (std::is_same_v<T, Product>) {
            for (const auto& f : a.factors) go(f);
          } else if constexpr (std::is_same_v<T, Quotient>) {
            go(a.num);
            go(a.den);
          } else if constexpr (std::is_same_v<T, Difference>) {
            go(a.lhs);
            go(a.rhs);
          }
        },
        x.node().v);
  };
  go(e);
  return found;
}

// ---- substitution

static std::vector<Atom> sub_atoms(const std::vector<Atom>& v, const std::map<std::string, std::string>& s) {
  std::vector<Atom> out = v;
  for (auto& a : out)
    if (auto it = s.find(a.value); it != s.end()) a.value = it->second;
  return out;
}

// Shared by Sum and Mean: drop shadowed keys, rename bound symbols that would capture.
static std::pair<std::vector<Binding>, Estimand> sub_binder(std::vector<Binding> bound, const Estimand& body,
                                                           const std::map<std::string, std::string>& s) {
  auto inner = s;
  for (const auto& b : bound) inner.erase(b.symbol);
  auto body_free = free_symbols(body);
  std::set<std::string> targets;
  for (const auto& [k, v] : inner)
    if (body_free.count(k)) targets.insert(v);
  Estimand nb = body;
  std::set<std::string> used = all_symbols(body);
  for (const auto& [k, v] : inner) used.insert(v);
  for (auto& b : bound) used.insert(b.symbol);
  for (auto& b : bound) {
    if (targets.count(b.symbol)) {
      std::string f = fresh_symbol(b.symbol, used);
      used.insert(f);
      nb = substitute(nb, {{b.symbol, f}});
      b.symbol = f;
    }
  }
  return {bound, substitute(nb, inner)};
}

Estimand substitute(const Estimand& e, const std::map<std::string, std::string>& s) {
  if (s.empty()) return e;
  return std::visit(
      [&](const auto& a) -> Estimand {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Term>) return Estimand::term(sub_atoms(a.joint, s), sub_atoms(a.given, s));
        else if constexpr (std::is_same_v<T, DoTerm>)
          return Estimand::do_term(sub_atoms(a.joint, s), sub_atoms(a.doset, s), sub_atoms(a.given, s));
        else if constexpr (std::is_same_v<T, Expectation>)
          return Estimand::expectation(a.target, sub_atoms(a.given, s), sub_atoms(a.doset, s));
        else if constexpr (std::is_same_v<T, Sum>) {
          auto [b, body] = sub_binder(a.bound, a.body, s);
          return Estimand::sum(b, body);
        } else if constexpr (std::is_same_v<T, Mean>) {
          auto [b, body] = sub_binder({a.bound}, a.body, s);
          return Estimand::mean(b[0], body);
        } else if constexpr (std::is_same_v<T, Product>) {
          std::vector<Estimand> f;
          for (const auto& x : a.factors) f.push_back(substitute(x, s));
          return Estimand::product(f);
        } else if constexpr (std::is_same_v<T, Quotient>)
          return Estimand::quotient(substitute(a.num, s), substitute(a.den, s));
        else if constexpr (std::is_same_v<T, Difference>)
          return Estimand::difference(substitute(a.lhs, s), substitute(a.rhs, s));
        else return e;
      },
      e.node().v);
}

static Estimand hygiene_rec(const Estimand& e, std::set<std::string> scope) {
  return std::visit(
      [&](const auto& a) -> Estimand {
        using T = std::decay_t<decltype(a)>;
        auto rebind = [&](std::vector<Binding> bound, Estimand body) {
          std::set<std::string> used = scope;
          auto syms = all_symbols(body);
          used.insert(syms.begin(), syms.end());
          for (const auto& b : bound) used.insert(b.symbol);
          for (auto& b : bound) {
            if (scope.count(b.symbol)) {
              std::string f = fresh_symbol(b.symbol, used);
              used.insert(f);
              body = substitute(body, {{b.symbol, f}});
              b.symbol = f;
            }
          }
          auto inner = scope;
          for (const auto& b : bound) inner.insert(b.symbol);
          return std::make_pair(bound, hygiene_rec(body, inner));
        };
        if constexpr (std::is_same_v<T, Sum>) {
          auto [b, body] = rebind(a.bound, a.body);
          return Estimand::sum(b, body);
        } else if constexpr (std::is_same_v<T, Mean>) {
          auto [b, body] = rebind({a.bound}, a.body);
          return Estimand::mean(b[0], body);
        } else if constexpr (std::is_same_v<T, Product>) {
          std::vector<Estimand> f;
          for (const auto& x : a.factors) f.push_back(hygiene_rec(x, scope));
          return Estimand::product(f);
        } else if constexpr (std::is_same_v<T, Quotient>)
          return Estimand::quotient(hygiene_rec(a.num, scope), hygiene_rec(a.den, scope));
        else if constexpr (std::is_same_v<T, Difference>)
          return Estimand::difference(hygiene_rec(a.lhs, scope), hygiene_rec(a.rhs, scope));
        else return e;
      },
      e.node().v);
}

Estimand hygienic(const Estimand& e) { return hygiene_rec(e, free_symbols(e)); }

// ---- builders

Estimand product_of(std::vector<Estimand> factors) {
  std::vector<Estimand> flat;
  double c = 1.0;
  std::function<void(const Estimand&)> add = [&](const Estimand& f) {
    if (auto p = as<Product>(f)) {
      for (const auto& g : p->factors) add(g);
    } else if (auto k = as<Constant>(f)) {
      c *= k->value;
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) add(f);
  if (c == 0.0) return Estimand::constant(0.0);
  if (c != 1.0) flat.insert(flat.begin(), Estimand::constant(c));
  if (flat.empty()) return Estimand::constant(1.0);
  if (flat.size() == 1) return flat[0];
  return Estimand::product(flat);
}

Estimand sum_of(std::vector<Binding> bound, Estimand body) {
  if (bound.empty()) return body;
  if (body.is_constant(0.0)) return body;
  if (auto s = as<Sum>(body)) {
    bound.insert(bound.end(), s->bound.begin(), s->bound.end());
    return Estimand::sum(bound, s->body);
  }
  return Estimand::sum(bound, body);
}

// ---- rendering

namespace {

struct Renderer {
  Format fmt;
  const NodeSet* nodes;

  bool bare(const std::string& var, const std::string& value) const {
    if (nodes) return resolve_symbol(value, *nodes) == var;
    return symbol_belongs(value, var);
  }

  std::string atom(const Atom& a) const {
    if (bare(a.var, a.value)) return a.value;
    return a.var + "=" + a.value;
  }

  std::string atoms(const std::vector<Atom>& v) const {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + atom(v[i]);
    return out;
  }

  std::string binding(const Binding& b) const {
    if (bare(b.var, b.symbol)) return b.symbol;
    return b.var + "=" + b.symbol;
  }

  std::string bar() const { return fmt == Format::Latex ? " \\mid " : "|"; }

  std::string cond(const std::vector<Atom>& doset, const std::vector<Atom>& given) const {
    std::string rhs;
    if (!doset.empty()) rhs = (fmt == Format::Latex ? "\\mathrm{do}(" : "do(") + atoms(doset) + ")";
    if (!given.empty()) rhs += (rhs.empty() ? "" : ",") + atoms(given);
    return rhs.empty() ? "" : bar() + rhs;
  }

  static std::string number(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(v));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::string binder(const char* text, const char* latex, const std::vector<Binding>& bs) const {
    std::string out = fmt == Format::Latex ? latex : text;
    out += "{";
    for (size_t i = 0; i < bs.size(); ++i) out += (i ? "," : "") + binding(bs[i]);
    return out + "} ";
  }

  std::string go(const Estimand& e, bool in_product) const {
    return std::visit(
        [&](const auto& a) -> std::string {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, Term>) return "P(" + atoms(a.joint) + cond({}, a.given) + ")";
          else if constexpr (std::is_same_v<T, DoTerm>)
            return "P(" + atoms(a.joint) + cond(a.doset, a.given) + ")";
          else if constexpr (std::is_same_v<T, Expectation>)
            return "E[" + a.target + cond(a.doset, a.given) + "]";
          else if constexpr (std::is_same_v<T, Sum>) return binder("sum_", "\\sum_", a.bound) + go(a.body, false);
          else if constexpr (std::is_same_v<T, Mean>) {
            if (fmt == Format::Latex)
              return "\\sum_{" + binding(a.bound) + "} " + a.bound.symbol + " \\cdot " + go(a.body, false);
            return binder("mean_", "", {a.bound}) + go(a.body, false);
          } else if constexpr (std::is_same_v<T, Product>) {
            std::string out;
            for (size_t i = 0; i < a.factors.size(); ++i) {
              const auto& f = a.factors[i];
              bool last = i + 1 == a.factors.size();
              std::string s = go(f, true);
              auto k = f.kind();
              bool wrap = (k == Estimand::Kind::Quotient || k == Estimand::Kind::Difference) ||
                          (!last && (k == Estimand::Kind::Sum || k == Estimand::Kind::Mean));
              if (fmt == Format::Latex && k == Estimand::Kind::Quotient) wrap = false;
              if (wrap) s = fmt == Format::Latex ? "\\left(" + s + "\\right)" : "(" + s + ")";
              out += (i ? (fmt == Format::Latex ? "\\," : " ") : "") + s;
            }
            return out;
          } else if constexpr (std::is_same_v<T, Quotient>) {
            if (fmt == Format::Latex) return "\\frac{" + go(a.num, false) + "}{" + go(a.den, false) + "}";
            return "(" + go(a.num, false) + ") / (" + go(a.den, false) + ")";
          } else if constexpr (std::is_same_v<T, Difference>) {
            if (fmt == Format::Latex)
              return "\\left(" + go(a.lhs, false) + "\\right) - \\left(" + go(a.rhs, false) + "\\right)";
            return "(" + go(a.lhs, false) + ") - (" + go(a.rhs, false) + ")";
          } else {
            (void)in_product;
            return number(a.value);
          }
        },
        e.node().v);
  }
};

nlohmann::json atoms_json(const std::vector<Atom>& v) {
  auto out = nlohmann::json::array();
  for (const auto& a : v) out.push_back({{"var", a.var}, {"value", a.value}});
  return out;
}

nlohmann::json structured(const Estimand& e) {
  return std::visit(
      [&](const auto& a) -> nlohmann::json {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Term>)
          return {{"kind", "term"}, {"joint", atoms_json(a.joint)}, {"given", atoms_json(a.given)}};
        else if constexpr (std::is_same_v<T, DoTerm>)
          return {{"kind", "do_term"},
                  {"joint", atoms_json(a.joint)},
                  {"do", atoms_json(a.doset)},
                  {"given", atoms_json(a.given)}};
        else if constexpr (std::is_same_v<T, Expectation>)
          return {{"kind", "expectation"},
                  {"target", a.target},
                  {"given", atoms_json(a.given)},
                  {"do", atoms_json(a.doset)}};
        else if constexpr (std::is_same_v<T, Sum> || std::is_same_v<T, Mean>) {
          auto b = nlohmann::json::array();
          std::vector<Binding> bs;
          if constexpr (std::is_same_v<T, Sum>) bs = a.bound;
          else bs = {a.bound};
          for (const auto& x : bs) b.push_back({{"var", x.var}, {"symbol", x.symbol}});
          return {{"kind", std::is_same_v<T, Sum> ? "sum" : "mean"},
                  {"bound", b},
                  {"children", nlohmann::json::array({structured(a.body)})}};
        } else if constexpr (std::is_same_v<T, Product>) {
          auto c = nlohmann::json::array();
          for (const auto& f : a.factors) c.push_back(structured(f));
          return {{"kind", "product"}, {"children", c}};
        } else if constexpr (std::is_same_v<T, Quotient>)
          return {{"kind", "quotient"}, {"children", {structured(a.num), structured(a.den)}}};
        else if constexpr (std::is_same_v<T, Difference>)
          return {{"kind", "difference"}, {"children", {structured(a.lhs), structured(a.rhs)}}};
        else return {{"kind", "constant"}, {"value", a.value}};
      },
      e.node().v);
}

}  // namespace

std::string render(const Estimand& e, Format f, const NodeSet* nodes) {
  if (f == Format::Structured) return structured(e).dump();
  return Renderer{f, nodes}.go(e, false);
}

}  // namespace causid
