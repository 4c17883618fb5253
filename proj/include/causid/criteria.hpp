#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causid/estimand.hpp"

namespace causid {

struct Violation {
  std::string path;    // e.g. "A<-W<-C2->Y"
  std::string reason;  // open-backdoor, descendant-in-set, unintercepted-path
};

struct AdjustmentReport {
  bool admissible = true;
  std::vector<Violation> violations;
};

struct AdjustmentSet {
  NodeSet nodes;
  bool minimal = false;
};

AdjustmentReport is_backdoor_admissible(const Admg& g, const std::string& a, const std::string& y, const NodeSet& c);
// max_size < 0 means no cap. Ordered by size, then lexicographically.
std::vector<AdjustmentSet> enumerate_backdoor_sets(const Admg& g, const std::string& a, const std::string& y,
                                                   int max_size = -1);
Estimand backdoor_estimand(const Atom& a, const Atom& y, const NodeSet& c);
std::optional<Estimand> parents_estimand(const Admg& g, const Atom& a, const Atom& y);

AdjustmentReport is_frontdoor_admissible(const Admg& g, const std::string& a, const std::string& y, const NodeSet& m);
Estimand frontdoor_estimand(const Atom& a, const Atom& y, const NodeSet& m);

Estimand truncated_estimand(const Admg& g, const Atom& a, const Atom& y);
Estimand c_factor(const Admg& g, const NodeSet& component, const std::vector<std::string>& order);
std::optional<Estimand> tian_effect_estimand(const Admg& g, const Atom& a, const Atom& y);

enum class InstrumentCut { Outgoing, Incoming };

struct Instrument {
  std::string instrument;
  NodeSet conditioning;
  bool operator==(const Instrument&) const = default;
};

std::vector<Instrument> find_instruments(const Admg& g, const std::string& a, const std::string& y,
                                         int max_conditioning = 2, InstrumentCut cut = InstrumentCut::Outgoing);

// lowercase node name, or the name itself when lowercasing would collide
std::string default_symbol(const Admg& g, const std::string& v);
std::vector<Atom> default_atoms(const Admg& g, const NodeSet& s);

}  // namespace causid
