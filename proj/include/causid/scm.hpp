#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causid/estimand.hpp"
#include "causid/graph.hpp"
#include "causid/query.hpp"

namespace causid {

struct Variable {
  std::string name;
  std::vector<std::string> domain;
};

struct Exogenous {
  std::string name;
  std::vector<std::string> domain;
  std::vector<double> prior;
};

// Rows keyed by "P1=v1,P2=v2" in the order of `parents`; "" when there are none.
struct Table {
  std::vector<std::string> parents;
  std::map<std::string, std::vector<double>> rows;
};

struct DiscreteScm {
  Admg graph;
  std::vector<Variable> variables;
  std::vector<Exogenous> exogenous;
  std::map<std::string, Table> tables;

  const Variable& variable(const std::string& name) const;
  size_t value_index(const std::string& var, const std::string& token) const;
};

void validate(const DiscreteScm& m);
DiscreteScm model_from_json(const std::string& text);
std::string model_to_json(const DiscreteScm& m);
DiscreteScm load_model(const std::string& path);

class Distribution {
 public:
  Distribution() = default;
  Distribution(std::vector<Variable> vars, std::vector<double> p);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<double>& probabilities() const { return p_; }
  int index_of(const std::string& var) const;  // -1 when absent
  // Mixed radix, last variable fastest.
  size_t flat_index(const std::vector<size_t>& values) const;

  // Marginal probability of a partial assignment (var -> token).
  double prob(const std::map<std::string, std::string>& event) const;

 private:
  std::vector<Variable> vars_;
  std::vector<double> p_;
};

constexpr std::uint64_t kDefaultStateCap = 10'000'000;

Distribution joint(const DiscreteScm& m, std::uint64_t cap = kDefaultStateCap);
Distribution joint_with_exogenous(const DiscreteScm& m, std::uint64_t cap = kDefaultStateCap);
Distribution intervene(const DiscreteScm& m, const std::map<std::string, std::string>& doset,
                       std::uint64_t cap = kDefaultStateCap);

// Atom values must be domain tokens.
double ctf_probability(const DiscreteScm& m, const Conjunction& gamma, const Conjunction& delta = {},
                       std::uint64_t cap = kDefaultStateCap);

double pse_value(const DiscreteScm& m, const std::string& a, const std::string& y, const std::vector<Path>& pi,
                 const std::string& a1, const std::string& a0, const std::string& yval,
                 std::uint64_t cap = kDefaultStateCap);

enum class EffectKind { TV, TE, NDE, NIE, PSE };

struct EffectParams {
  std::string treatment, outcome;
  std::string a1, a0;
  std::string y;  // for TV, TE, PSE
  std::vector<Path> pi;
};

double effect_measure(const DiscreteScm& m, EffectKind kind, const EffectParams& p);

struct EvalDiagnostics {
  std::vector<std::string> messages;
};

// env maps symbols to domain tokens; unmapped symbols are read as literal tokens.
double eval_estimand(const Estimand& e, const Distribution& d, const std::map<std::string, std::string>& env = {},
                     EvalDiagnostics* diag = nullptr);

DiscreteScm random_scm(const Admg& g, std::uint64_t seed, int domain_size = 2);
// Per-variable domain sizes drawn from [2, max_domain].
DiscreteScm random_scm_mixed(const Admg& g, std::uint64_t seed, int max_domain);

}  // namespace causid
