#pragma once

#include <memory>
#include <string>
#include <vector>

#include "causid/estimand.hpp"

namespace causid {

struct CtfAtom;

// One subscript entry: Var=value, or Var=<natural value of a nested counterfactual>.
struct SubEntry {
  std::string var;
  std::string value;
  std::shared_ptr<const CtfAtom> nested;
};

struct CtfAtom {
  std::string var;
  std::string value;  // empty for a nested atom
  std::vector<SubEntry> subscript;
};

using Conjunction = std::vector<CtfAtom>;

std::string render_ctf(const CtfAtom& a);
std::string render_ctf(const Conjunction& c);

// Causal query P(Y=y,...|do(A=a),...) or counterfactual query P(Y[A=1]=1, A=0 | ...).
struct Query {
  bool counterfactual = false;
  std::vector<Atom> outcome, doset, given;  // causal form
  Conjunction gamma, delta;                 // counterfactual form
};

// Symbols default to lowercase variable names when a value is omitted.
Query parse_query(const std::string& text, const NodeSet& nodes);

// Rewrites atom values through env (symbol -> token), recursively.
Conjunction bind_values(const Conjunction& c, const std::map<std::string, std::string>& env);

}  // namespace causid
