#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "causid/identify.hpp"

namespace causid {

// Paths from a to y. An edge is active when it lies on some listed path; a
// path counts as "in pi" when every edge on it is active.
struct PathSet {
  std::string a, y;
  std::vector<Path> paths;
  std::set<Edge> active;
};

PathSet make_path_set(const Admg& g, const std::string& a, const std::string& y, std::vector<Path> paths);

// De(a) ∩ An(y) minus a and y
NodeSet mediators(const Admg& g, const std::string& a, const std::string& y);

IdentResult nde_estimand(const Admg& g, const std::string& a, const std::string& y, const std::string& a1,
                         const std::string& a0, const std::optional<NodeSet>& z = std::nullopt);
IdentResult nie_estimand(const Admg& g, const std::string& a, const std::string& y, const std::string& a1,
                         const std::string& a0, const std::optional<NodeSet>& z = std::nullopt);

std::optional<PseWitness> recanting_witness(const Admg& g, const PathSet& pi);
std::optional<PseWitness> recanting_district(const Admg& g, const PathSet& pi);

// P(y_{a1|pi, a0|not pi})
IdentResult pse_term_estimand(const Admg& g, const PathSet& pi, const std::string& a1, const std::string& a0,
                              const std::string& yval = "");
// The term minus P(y_{a0}).
IdentResult pse_estimand(const Admg& g, const PathSet& pi, const std::string& a1, const std::string& a0,
                         const std::string& yval = "");

}  // namespace causid
