#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causid/graph.hpp"

namespace causid {

// Nodes V1..Vn in a random order, n in [2, max_nodes].
Admg random_admg(std::uint64_t seed, int max_nodes, bool markovian);

struct FuzzReport {
  int graphs = 0;
  int identifiable = 0;
  int checks = 0;
  double max_error = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// For each graph: a random effect query, a random model with domains up to 3,
// the estimand (simplified and raw) against the mutilated model. Markovian
// graphs must also come out identifiable.
FuzzReport run_fuzz(int graphs, std::uint64_t seed, bool markovian, double tolerance = 1e-9);

}  // namespace causid
