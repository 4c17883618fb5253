#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causid/error.hpp"

namespace causid {

using NodeSet = std::set<std::string>;
using Edge = std::pair<std::string, std::string>;
using Path = std::vector<std::string>;

// Acyclic directed mixed graph. Bidirected pairs are stored with first < second.
class Admg {
 public:
  Admg() = default;

  // Validates: no duplicate nodes, no unknown endpoints, no self loops, acyclic.
  static Admg build(const std::vector<std::string>& nodes, const std::vector<Edge>& directed,
                    const std::vector<Edge>& bidirected = {});

  const NodeSet& nodes() const { return nodes_; }
  const std::set<Edge>& directed() const { return directed_; }
  const std::set<Edge>& bidirected() const { return bidirected_; }

  bool has_node(const std::string& v) const { return nodes_.count(v) > 0; }
  bool has_directed(const std::string& a, const std::string& b) const {
    return directed_.count({a, b}) > 0;
  }
  bool has_bidirected(const std::string& a, const std::string& b) const;
  bool is_markovian() const { return bidirected_.empty(); }

  const NodeSet& parents(const std::string& v) const;
  const NodeSet& children(const std::string& v) const;
  const NodeSet& spouses(const std::string& v) const;

  NodeSet parents_of(const NodeSet& s) const;

  void require(const std::string& v) const;
  void require(const NodeSet& s) const;

  bool operator==(const Admg& o) const {
    return nodes_ == o.nodes_ && directed_ == o.directed_ && bidirected_ == o.bidirected_;
  }

 private:
  NodeSet nodes_;
  std::set<Edge> directed_;
  std::set<Edge> bidirected_;
  std::map<std::string, NodeSet> pa_, ch_, sp_;

  void index();
};

// Lexicographic tie-break among ready nodes.
std::vector<std::string> topological_order(const Admg& g);

// Both reflexive.
NodeSet ancestors(const Admg& g, const NodeSet& s);
NodeSet descendants(const Admg& g, const NodeSet& s);

// Removes directed edges into cut_in, bidirected edges touching cut_in, and
// directed edges out of cut_out.
Admg mutilate(const Admg& g, const NodeSet& cut_in, const NodeSet& cut_out = {});
Admg induced(const Admg& g, const NodeSet& s);

// Sorted by smallest member.
std::vector<NodeSet> c_components(const Admg& g);
NodeSet district_of(const Admg& g, const std::string& v);

bool m_separated(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

// All directed paths from a to y, in DFS order over sorted children.
std::vector<Path> proper_causal_paths(const Admg& g, const std::string& a, const std::string& y);

std::string format_set(const NodeSet& s);
std::string format_path(const Path& p);

}  // namespace causid
