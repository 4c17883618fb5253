#include "causid/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace causid {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::CycleError: return "CycleError";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotMarkovian: return "NotMarkovian";
    case ErrorCode::NotAComponent: return "NotAComponent";
    case ErrorCode::DegenerateQuery: return "DegenerateQuery";
    case ErrorCode::DegenerateContrast: return "DegenerateContrast";
    case ErrorCode::InconsistentQuery: return "InconsistentQuery";
    case ErrorCode::BadAdjustmentSet: return "BadAdjustmentSet";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::DomainTooLarge: return "DomainTooLarge";
    case ErrorCode::FreeVariableUnbound: return "FreeVariableUnbound";
    case ErrorCode::ContainsDoTerm: return "ContainsDoTerm";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownSubcommand: return "UnknownSubcommand";
    case ErrorCode::MissingFlag: return "MissingFlag";
  }
  return "Error";
}

namespace {
const NodeSet kEmpty;
}

Admg Admg::build(const std::vector<std::string>& nodes, const std::vector<Edge>& directed,
                 const std::vector<Edge>& bidirected) {
  Admg g;
  for (const auto& v : nodes) {
    if (v.empty()) throw Error(ErrorCode::InvalidArgument, "empty node name");
    if (!g.nodes_.insert(v).second) throw Error(ErrorCode::DuplicateNode, v);
  }
  auto check = [&](const Edge& e) {
    g.require(e.first);
    g.require(e.second);
    if (e.first == e.second) throw Error(ErrorCode::SelfLoop, e.first);
  };
  for (const auto& e : directed) {
    check(e);
    g.directed_.insert(e);
  }
  for (const auto& e : bidirected) {
    check(e);
    g.bidirected_.insert(e.first < e.second ? e : Edge{e.second, e.first});
  }
  g.index();
  // Kahn; leftover nodes mean a cycle
  if (topological_order(g).size() != g.nodes_.size()) {
    std::string where;
    for (const auto& [a, b] : g.directed_) where += a + "->" + b + " ";
    throw Error(ErrorCode::CycleError, "directed cycle among edges " + where);
  }
  return g;
}

void Admg::index() {
  pa_.clear();
  ch_.clear();
  sp_.clear();
  for (const auto& v : nodes_) {
    pa_[v];
    ch_[v];
    sp_[v];
  }
  for (const auto& [a, b] : directed_) {
    pa_[b].insert(a);
    ch_[a].insert(b);
  }
  for (const auto& [a, b] : bidirected_) {
    sp_[a].insert(b);
    sp_[b].insert(a);
  }
}

bool Admg::has_bidirected(const std::string& a, const std::string& b) const {
  return bidirected_.count(a < b ? Edge{a, b} : Edge{b, a}) > 0;
}

const NodeSet& Admg::parents(const std::string& v) const {
  auto it = pa_.find(v);
  if (it == pa_.end()) throw Error(ErrorCode::UnknownNode, v);
  return it->second;
}
const NodeSet& Admg::children(const std::string& v) const {
  auto it = ch_.find(v);
  if (it == ch_.end()) throw Error(ErrorCode::UnknownNode, v);
  return it->second;
}
const NodeSet& Admg::spouses(const std::string& v) const {
  auto it = sp_.find(v);
  if (it == sp_.end()) return kEmpty;
  return it->second;
}

NodeSet Admg::parents_of(const NodeSet& s) const {
  NodeSet out;
  for (const auto& v : s)
    for (const auto& p : parents(v)) out.insert(p);
  return out;
}

void Admg::require(const std::string& v) const {
  if (!has_node(v)) throw Error(ErrorCode::UnknownNode, v);
}
void Admg::require(const NodeSet& s) const {
  for (const auto& v : s) require(v);
}

std::vector<std::string> topological_order(const Admg& g) {
  std::map<std::string, int> indeg;
  for (const auto& v : g.nodes()) indeg[v] = 0;
  for (const auto& e : g.directed()) indeg[e.second]++;
  std::set<std::string> ready;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.insert(v);
  std::vector<std::string> out;
  while (!ready.empty()) {
    auto v = *ready.begin();
    ready.erase(ready.begin());
    out.push_back(v);
    for (const auto& c : g.children(v))
      if (--indeg[c] == 0) ready.insert(c);
  }
  return out;
}

static NodeSet closure(const Admg& g, const NodeSet& s, bool up) {
  g.require(s);
  NodeSet seen = s;
  std::deque<std::string> q(s.begin(), s.end());
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (const auto& n : up ? g.parents(v) : g.children(v))
      if (seen.insert(n).second) q.push_back(n);
  }
  return seen;
}

NodeSet ancestors(const Admg& g, const NodeSet& s) { return closure(g, s, true); }
NodeSet descendants(const Admg& g, const NodeSet& s) { return closure(g, s, false); }

Admg mutilate(const Admg& g, const NodeSet& cut_in, const NodeSet& cut_out) {
  g.require(cut_in);
  g.require(cut_out);
  std::vector<Edge> d, b;
  for (const auto& e : g.directed())
    if (!cut_in.count(e.second) && !cut_out.count(e.first)) d.push_back(e);
  for (const auto& e : g.bidirected())
    if (!cut_in.count(e.first) && !cut_in.count(e.second)) b.push_back(e);
  return Admg::build({g.nodes().begin(), g.nodes().end()}, d, b);
}

Admg induced(const Admg& g, const NodeSet& s) {
  g.require(s);
  std::vector<Edge> d, b;
  for (const auto& e : g.directed())
    if (s.count(e.first) && s.count(e.second)) d.push_back(e);
  for (const auto& e : g.bidirected())
    if (s.count(e.first) && s.count(e.second)) b.push_back(e);
  return Admg::build({s.begin(), s.end()}, d, b);
}

NodeSet district_of(const Admg& g, const std::string& v) {
  g.require(v);
  NodeSet seen{v};
  std::deque<std::string> q{v};
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (const auto& w : g.spouses(u))
      if (seen.insert(w).second) q.push_back(w);
  }
  return seen;
}

std::vector<NodeSet> c_components(const Admg& g) {
  std::vector<NodeSet> out;
  NodeSet done;
  // nodes iterate sorted, so components come out ordered by smallest member
  for (const auto& v : g.nodes()) {
    if (done.count(v)) continue;
    auto d = district_of(g, v);
    done.insert(d.begin(), d.end());
    out.push_back(std::move(d));
  }
  return out;
}

bool m_separated(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
  g.require(x);
  g.require(y);
  g.require(z);
  for (const auto& v : x)
    if (y.count(v) || z.count(v)) throw Error(ErrorCode::InvalidArgument, "sets not disjoint: " + v);
  for (const auto& v : y)
    if (z.count(v)) throw Error(ErrorCode::InvalidArgument, "sets not disjoint: " + v);
  if (x.empty() || y.empty()) return true;

  // Reachability with a bidirected edge read as a latent fork.
  const NodeSet anz = ancestors(g, z);
  std::set<std::pair<std::string, bool>> seen;  // (node, arrived going up)
  std::deque<std::pair<std::string, bool>> q;
  for (const auto& v : x) q.push_back({v, true});
  while (!q.empty()) {
    auto [v, up] = q.front();
    q.pop_front();
    if (!seen.insert({v, up}).second) continue;
    bool inz = z.count(v) > 0;
    if (!inz && y.count(v)) return false;
    bool pass_up = up ? !inz : anz.count(v) > 0;
    bool pass_down = !inz;
    if (pass_up) {
      for (const auto& p : g.parents(v)) q.push_back({p, true});
      for (const auto& s : g.spouses(v)) q.push_back({s, false});
    }
    if (pass_down)
      for (const auto& c : g.children(v)) q.push_back({c, false});
  }
  return true;
}

std::vector<Path> proper_causal_paths(const Admg& g, const std::string& a, const std::string& y) {
  g.require(a);
  g.require(y);
  std::vector<Path> out;
  Path cur{a};
  std::function<void(const std::string&)> dfs = [&](const std::string& v) {
    if (v == y) {
      if (cur.size() > 1) out.push_back(cur);
      return;
    }
    for (const auto& c : g.children(v)) {
      cur.push_back(c);
      dfs(c);
      cur.pop_back();
    }
  };
  if (a != y) dfs(a);
  return out;
}

std::string format_set(const NodeSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ",";
    out += v;
    first = false;
  }
  return out + "}";
}

std::string format_path(const Path& p) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) out += (i ? "->" : "") + p[i];
  return out;
}

}  // namespace causid
