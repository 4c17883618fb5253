#pragma once

#include "causid/estimand.hpp"
#include "causid/result.hpp"

namespace causid {

struct IdentifyOptions {
  // Try back-door, front-door and Tian's formula before the general recursion
  // (single treatment and outcome only).
  bool prefer_criteria = true;
  bool simplify = true;
};

// P(y|do(x)) with values taken from the atoms. x may be empty.
IdentResult identify_atoms(const Admg& g, const std::vector<Atom>& x, const std::vector<Atom>& y,
                           const IdentifyOptions& opt = {});
// P(y|do(x),z)
IdentResult identify_conditional(const Admg& g, std::vector<Atom> x, const std::vector<Atom>& y, std::vector<Atom> z,
                                 const IdentifyOptions& opt = {});
// Default symbols (lowercase names).
IdentResult identify(const Admg& g, const NodeSet& x, const NodeSet& y, const IdentifyOptions& opt = {});

bool verify_hedge(const Admg& g, const Hedge& h, const NodeSet& x, const NodeSet& y);

// do-calculus side conditions; used by tests
bool rule1_applies(const Admg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& w);
bool rule2_applies(const Admg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& w);
bool rule3_applies(const Admg& g, const NodeSet& y, const NodeSet& x, const NodeSet& z, const NodeSet& w);

}  // namespace causid
