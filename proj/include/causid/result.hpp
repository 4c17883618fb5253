#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "causid/estimand.hpp"

namespace causid {

struct Hedge {
  NodeSet f, f_prime, root_set;
};

struct PseWitness {
  enum class Kind { RecantingWitness, RecantingDistrict } kind;
  NodeSet nodes;
};

// Offending district of a counterfactual graph.
struct CtfWitness {
  std::vector<std::string> nodes;
  std::string reason;
};

using Witness = std::variant<Hedge, PseWitness, CtfWitness>;

struct IdentResult {
  std::optional<Estimand> estimand;
  std::optional<Witness> witness;
  std::vector<std::string> diagnostics;

  bool identifiable() const { return estimand.has_value(); }
  static IdentResult ok(Estimand e) { return {std::move(e), std::nullopt, {}}; }
  static IdentResult fail(Witness w) { return {std::nullopt, std::move(w), {}}; }
};

std::string render_witness(const Witness& w);

}  // namespace causid
