#pragma once

#include <map>
#include <string>
#include <vector>

#include "causid/identify.hpp"
#include "causid/query.hpp"

namespace causid {

using World = std::map<std::string, std::string>;  // subscript: var -> value

struct CgNode {
  std::string var;
  World world;
  bool intervened = false;
  std::string value;  // known value (intervention or observation), empty if unknown
};

struct WorldGraph {
  Admg base;
  std::vector<World> worlds;                  // actual world first when present
  std::map<std::string, std::string> merged;  // every copy name -> canonical node name
  std::map<std::string, CgNode> nodes;        // canonical nodes
  Admg graph;                                 // merged parallel-worlds graph
  Admg restricted;                            // ancestors of the query inside `graph`
};

struct CgResult {
  WorldGraph wg;
  std::vector<std::pair<std::string, std::string>> query;  // canonical node, value
  bool inconsistent = false;
};

// Node copy name: "Y" in the actual world, "Y@{A=a1}" otherwise.
std::string copy_name(const std::string& var, const World& w);

// Atoms must not contain nested subscripts.
CgResult make_cg(const Admg& g, const Conjunction& q);

IdentResult identify_ctf(const Admg& g, const Conjunction& gamma, const IdentifyOptions& opt = {});
IdentResult identify_ctf_conditional(const Admg& g, const Conjunction& gamma, const Conjunction& delta,
                                     const IdentifyOptions& opt = {});

}  // namespace causid
