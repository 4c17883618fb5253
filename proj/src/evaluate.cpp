#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_map>

#include "causid/scm.hpp"

namespace causid {

namespace {

class Evaluator {
 public:
  Evaluator(const Distribution& d, EvalDiagnostics* diag) : d_(d), diag_(diag) {}

  double eval(const Estimand& e, std::map<std::string, std::string>& env) {
    return std::visit(
        [&](const auto& a) -> double {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, Term>) {
            std::map<int, int> all, given;
            if (!collect(a.joint, env, all) || !collect(a.given, env, all)) return 0.0;
            collect(a.given, env, given);
            return ratio(prob(all), prob(given), e);
          } else if constexpr (std::is_same_v<T, DoTerm>) {
            throw Error(ErrorCode::ContainsDoTerm, render(e));
          } else if constexpr (std::is_same_v<T, Expectation>) {
            if (!a.doset.empty()) throw Error(ErrorCode::ContainsDoTerm, render(e));
            int yi = d_.index_of(a.target);
            if (yi < 0) throw Error(ErrorCode::FreeVariableUnbound, a.target);
            std::map<int, int> given;
            if (!collect(a.given, env, given)) return 0.0;
            double pg = prob(given);
            if (pg == 0.0) {
              note("zero-probability conditioning in " + render(e) + "; read as 0");
              return 0.0;
            }
            const auto& dom = d_.variables()[static_cast<size_t>(yi)].domain;
            double s = 0;
            for (size_t k = 0; k < dom.size(); ++k) {
              auto ev = given;
              if (ev.count(yi) && ev[yi] != static_cast<int>(k)) continue;
              ev[yi] = static_cast<int>(k);
              s += number(dom[k], a.target) * prob(ev);
            }
            return s / pg;
          } else if constexpr (std::is_same_v<T, Sum>) {
            return sum_over(a.bound, 0, env, [&](std::map<std::string, std::string>& en) { return eval(a.body, en); });
          } else if constexpr (std::is_same_v<T, Mean>) {
            return sum_over({a.bound}, 0, env, [&](std::map<std::string, std::string>& en) {
              return number(en.at(a.bound.symbol), a.bound.var) * eval(a.body, en);
            });
          } else if constexpr (std::is_same_v<T, Product>) {
            double p = 1;
            for (const auto& f : a.factors) {
              p *= eval(f, env);
              if (p == 0.0) break;
            }
            return p;
          } else if constexpr (std::is_same_v<T, Quotient>) {
            return ratio(eval(a.num, env), eval(a.den, env), e);
          } else if constexpr (std::is_same_v<T, Difference>) {
            return eval(a.lhs, env) - eval(a.rhs, env);
          } else {
            return a.value;
          }
        },
        e.node().v);
  }

 private:
  const Distribution& d_;
  EvalDiagnostics* diag_;
  std::unordered_map<std::uint64_t, std::vector<double>> marginals_;

  void note(const std::string& m) {
    if (diag_ && std::find(diag_->messages.begin(), diag_->messages.end(), m) == diag_->messages.end())
      diag_->messages.push_back(m);
  }

  double ratio(double n, double d, const Estimand& e) {
    if (d == 0.0) {
      note("0/0 in " + render(e) + "; read as 0");
      return 0.0;
    }
    return n / d;
  }

  static double number(const std::string& tok, const std::string& var) {
    try {
      size_t used = 0;
      double v = std::stod(tok, &used);
      if (used == tok.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "expectation needs a numeric domain; " + var + " has '" + tok + "'");
  }

  int value_of(const Atom& a, const std::map<std::string, std::string>& env, int& var) {
    var = d_.index_of(a.var);
    if (var < 0) throw Error(ErrorCode::FreeVariableUnbound, "variable " + a.var + " not in the distribution");
    const auto& dom = d_.variables()[static_cast<size_t>(var)].domain;
    std::string tok = a.value;
    if (auto it = env.find(a.value); it != env.end()) tok = it->second;
    auto f = std::find(dom.begin(), dom.end(), tok);
    if (f == dom.end()) throw Error(ErrorCode::FreeVariableUnbound, "symbol '" + a.value + "' of " + a.var);
    return static_cast<int>(f - dom.begin());
  }

  // false when the atoms contradict each other
  bool collect(const std::vector<Atom>& atoms, const std::map<std::string, std::string>& env, std::map<int, int>& out) {
    bool ok = true;
    for (const auto& a : atoms) {
      int var;
      int v = value_of(a, env, var);
      auto [it, fresh] = out.emplace(var, v);
      if (!fresh && it->second != v) ok = false;
    }
    return ok;
  }

  double prob(const std::map<int, int>& ev) {
    if (ev.empty()) return 1.0;
    std::uint64_t mask = 0;
    for (const auto& [v, _] : ev) mask |= std::uint64_t{1} << v;
    auto it = marginals_.find(mask);
    const auto& vars = d_.variables();
    if (it == marginals_.end()) {
      size_t size = 1;
      for (const auto& [v, _] : ev) size *= vars[static_cast<size_t>(v)].domain.size();
      std::vector<double> m(size, 0.0);
      const auto& p = d_.probabilities();
      std::vector<size_t> digit(vars.size());
      for (size_t flat = 0; flat < p.size(); ++flat) {
        size_t r = flat;
        for (size_t i = vars.size(); i-- > 0;) {
          digit[i] = r % vars[i].domain.size();
          r /= vars[i].domain.size();
        }
        size_t idx = 0;
        for (const auto& [v, _] : ev) idx = idx * vars[static_cast<size_t>(v)].domain.size() + digit[static_cast<size_t>(v)];
        m[idx] += p[flat];
      }
      it = marginals_.emplace(mask, std::move(m)).first;
    }
    size_t idx = 0;
    for (const auto& [v, x] : ev) idx = idx * vars[static_cast<size_t>(v)].domain.size() + static_cast<size_t>(x);
    return it->second[idx];
  }

  double sum_over(const std::vector<Binding>& bs, size_t i, std::map<std::string, std::string>& env,
                  const std::function<double(std::map<std::string, std::string>&)>& body) {
    if (i == bs.size()) return body(env);
    int var = d_.index_of(bs[i].var);
    if (var < 0) throw Error(ErrorCode::FreeVariableUnbound, "bound variable " + bs[i].var);
    const auto& sym = bs[i].symbol;
    auto saved = env.find(sym) == env.end() ? std::optional<std::string>() : std::optional<std::string>(env[sym]);
    double s = 0;
    for (const auto& tok : d_.variables()[static_cast<size_t>(var)].domain) {
      env[sym] = tok;
      s += sum_over(bs, i + 1, env, body);
    }
    if (saved) env[sym] = *saved;
    else env.erase(sym);
    return s;
  }
};

}  // namespace

double eval_estimand(const Estimand& e, const Distribution& d, const std::map<std::string, std::string>& env,
                     EvalDiagnostics* diag) {
  if (d.variables().size() > 64) throw Error(ErrorCode::DomainTooLarge, "more than 64 variables");
  if (contains_do(e)) throw Error(ErrorCode::ContainsDoTerm, render(e));
  Evaluator ev(d, diag);
  auto en = env;
  return ev.eval(e, en);
}

}  // namespace causid
