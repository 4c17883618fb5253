#include "causid/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "causid/query.hpp"

namespace causid {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_ident(const std::string& s, int line, int col) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])))
    throw ParseError("expected a node name, got '" + s + "'", line, col);
  for (char c : s)
    if (!ident_char(c)) throw ParseError("bad node name '" + s + "'", line, col);
}

}  // namespace

Admg parse_graph(const std::string& text) {
  std::vector<std::string> nodes;
  std::vector<Edge> directed, bidirected;
  std::map<std::string, std::pair<int, int>> first_use;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    std::string t = trim(s);
    if (t.empty()) continue;
    int col = static_cast<int>(s.find_first_not_of(" \t")) + 1;
    if (t.rfind("node ", 0) == 0 || t.rfind("node\t", 0) == 0) {
      std::stringstream names(t.substr(5));
      std::string n;
      while (std::getline(names, n, ',')) {
        n = trim(n);
        check_ident(n, line, col);
        nodes.push_back(n);
      }
      continue;
    }
    // chains like A -> B <-> C are accepted
    size_t pos = 0;
    std::string prev;
    std::string pending;
    while (true) {
      size_t arrow_b = t.find("<->", pos), arrow_d = t.find("->", pos);
      size_t next = std::min(arrow_b, arrow_d);
      std::string name = trim(t.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
      check_ident(name, line, col + static_cast<int>(pos));
      first_use.emplace(name, std::make_pair(line, col + static_cast<int>(pos)));
      if (!prev.empty()) (pending == "<->" ? bidirected : directed).push_back({prev, name});
      if (next == std::string::npos) break;
      pending = next == arrow_b ? "<->" : "->";
      pos = next + pending.size();
      prev = name;
    }
    if (prev.empty()) throw ParseError("expected 'node ...' or an edge, got '" + t + "'", line, col);
  }
  NodeSet declared(nodes.begin(), nodes.end());
  for (const auto& [n, at] : first_use)
    if (!declared.count(n)) throw ParseError("unknown node '" + n + "' (declare it with 'node')", at.first, at.second);
  return Admg::build(nodes, directed, bidirected);
}

Admg load_graph(const std::string& path) { return parse_graph(read_file(path)); }

std::string serialize_graph(const Admg& g) {
  std::string out = "node ";
  bool first = true;
  for (const auto& v : g.nodes()) {
    out += (first ? "" : ", ") + v;
    first = false;
  }
  out += "\n";
  for (const auto& [a, b] : g.directed()) out += a + " -> " + b + "\n";
  for (const auto& [a, b] : g.bidirected()) out += a + " <-> " + b + "\n";
  return out;
}

Path parse_path(const std::string& text) {
  Path p;
  size_t pos = 0;
  while (true) {
    size_t next = text.find("->", pos);
    std::string n = trim(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    check_ident(n, 1, static_cast<int>(pos) + 1);
    p.push_back(n);
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  if (p.size() < 2) throw ParseError("a path needs at least two nodes", 1, 1);
  return p;
}

// ---- queries

std::string render_ctf(const CtfAtom& a) {
  std::string out = a.var;
  if (!a.subscript.empty()) {
    out += "[";
    for (size_t i = 0; i < a.subscript.size(); ++i) {
      const auto& e = a.subscript[i];
      out += i ? "," : "";
      if (e.nested) out += render_ctf(*e.nested);
      else out += e.var + "=" + e.value;
    }
    out += "]";
  }
  if (!a.value.empty()) out += "=" + a.value;
  return out;
}

std::string render_ctf(const Conjunction& c) {
  std::string out;
  for (size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + render_ctf(c[i]);
  return out;
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct QueryParser {
  const std::string& t;
  const NodeSet& nodes;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, 1, static_cast<int>(i) + 1); }
  void ws() {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  }
  bool peek(char c) {
    ws();
    return i < t.size() && t[i] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++i;
  }
  std::string token() {
    ws();
    size_t b = i;
    while (i < t.size() && (ident_char(t[i]) || t[i] == '\'' || t[i] == '.' || t[i] == '-')) ++i;
    if (b == i) fail("expected a name or value");
    return t.substr(b, i - b);
  }
  std::string var() {
    size_t at = i;
    std::string v = token();
    if (!nodes.count(v)) {
      i = at;
      fail("unknown variable '" + v + "'");
    }
    return v;
  }

  std::vector<SubEntry> subscript() {
    std::vector<SubEntry> out;
    expect('[');
    while (true) {
      std::string v = var();
      if (peek('[')) {
        auto inner = std::make_shared<CtfAtom>();
        inner->var = v;
        inner->subscript = subscript();
        out.push_back({v, "", inner});
      } else {
        expect('=');
        out.push_back({v, token(), nullptr});
      }
      if (peek(',')) {
        ++i;
        continue;
      }
      expect(']');
      return out;
    }
  }

  CtfAtom catom() {
    CtfAtom a;
    a.var = var();
    if (peek('[')) a.subscript = subscript();
    if (peek('=')) {
      ++i;
      a.value = token();
    } else {
      a.value = lower(a.var);
    }
    return a;
  }

  Query parse() {
    Query q;
    ws();
    if (token() != "P") fail("a query starts with P(");
    expect('(');
    Conjunction lhs, rhs;
    std::vector<Atom> doset;
    bool saw_do = false;
    auto list = [&](Conjunction& out, bool allow_do) {
      while (true) {
        size_t at = i;
        ws();
        if (allow_do && t.compare(i, 3, "do(") == 0) {
          i += 3;
          saw_do = true;
          while (true) {
            auto a = catom();
            if (!a.subscript.empty()) fail("subscripts are not allowed inside do()");
            doset.push_back({a.var, a.value});
            if (peek(',')) {
              ++i;
              continue;
            }
            expect(')');
            break;
          }
        } else {
          i = at;
          out.push_back(catom());
        }
        if (peek(',')) {
          ++i;
          continue;
        }
        return;
      }
    };
    list(lhs, false);
    if (peek('|')) {
      ++i;
      list(rhs, true);
    }
    expect(')');
    ws();
    if (i != t.size()) fail("trailing input");
    bool ctf = false;
    for (const auto* c : {&lhs, &rhs})
      for (const auto& a : *c)
        if (!a.subscript.empty()) ctf = true;
    if (ctf && saw_do) fail("mix of do() and counterfactual subscripts");
    q.counterfactual = ctf;
    if (ctf) {
      q.gamma = lhs;
      q.delta = rhs;
    } else {
      for (const auto& a : lhs) q.outcome.push_back({a.var, a.value});
      for (const auto& a : rhs) q.given.push_back({a.var, a.value});
      q.doset = doset;
    }
    return q;
  }
};

}  // namespace

Query parse_query(const std::string& text, const NodeSet& nodes) {
  QueryParser p{text, nodes};
  return p.parse();
}

Conjunction bind_values(const Conjunction& c, const std::map<std::string, std::string>& env) {
  Conjunction out = c;
  for (auto& a : out) {
    if (auto it = env.find(a.value); it != env.end()) a.value = it->second;
    for (auto& e : a.subscript) {
      if (e.nested) {
        Conjunction inner{*e.nested};
        e.nested = std::make_shared<CtfAtom>(bind_values(inner, env)[0]);
      } else if (auto it = env.find(e.value); it != env.end()) {
        e.value = it->second;
      }
    }
  }
  return out;
}

}  // namespace causid
