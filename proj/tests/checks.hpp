#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "causid/estimand.hpp"
#include "causid/scm.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace checks {

using causid::Admg;
using causid::DiscreteScm;
using causid::Estimand;
using support::Env;

constexpr int kModels = 20;

// Odd seeds binary, even seeds mixed domains up to 3.
inline DiscreteScm model_for(const Admg& g, int i) {
  auto seed = static_cast<std::uint64_t>(1000 + i);
  return i % 2 ? causid::random_scm(g, seed) : causid::random_scm_mixed(g, seed, 3);
}

inline const std::vector<std::string>& dom(const DiscreteScm& m, const std::string& v) {
  return m.variable(v).domain;
}

// Largest |f(model, env) - reference(model, env)| over the models and every
// value of the listed symbols. Symbols are bound through sym->var.
inline double max_error(const Admg& g, const std::vector<std::pair<std::string, std::string>>& symbols,
                        const std::function<double(const DiscreteScm&, const Env&)>& f,
                        const std::function<double(const DiscreteScm&, const Env&)>& reference,
                        int models = kModels, int stride = 1) {
  double worst = 0;
  for (int i = 1; i <= models; i += stride) {
    auto m = model_for(g, i);
    Env env;
    std::function<void(size_t)> go = [&](size_t k) {
      if (k == symbols.size()) {
        worst = std::max(worst, std::fabs(f(m, env) - reference(m, env)));
        return;
      }
      for (const auto& t : dom(m, symbols[k].second)) {
        env[symbols[k].first] = t;
        go(k + 1);
      }
    };
    go(0);
  }
  return worst;
}

inline std::function<double(const DiscreteScm&, const Env&)> value_of(const Estimand& e) {
  return [e](const DiscreteScm& m, const Env& env) { return support::eval(e, m, env); };
}

// P(Y=y | do(A=a)) from the reference enumeration.
inline double do_reference(const DiscreteScm& m, const Env& env) {
  return oracle::interventional(m, {{"A", env.at("a")}}, {{"Y", env.at("y")}});
}

inline double effect_error(const Admg& g, const Estimand& e) {
  return max_error(g, {{"a", "A"}, {"y", "Y"}}, value_of(e), do_reference);
}

inline double agreement(const Admg& g, const Estimand& e1, const Estimand& e2,
                        const std::vector<std::pair<std::string, std::string>>& symbols) {
  return max_error(g, symbols, value_of(e1), value_of(e2));
}

// Symbols for contrasts: a1 != a0 is not required by the estimands.
inline std::vector<std::pair<std::string, std::string>> contrast_symbols() {
  return {{"a1", "A"}, {"a0", "A"}, {"y", "Y"}};
}

}  // namespace checks
