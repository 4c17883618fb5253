#include <cctype>

#include "causid/estimand.hpp"

namespace causid {

namespace {

struct Tok {
  enum K { Ident, Number, Punct, End } k;
  std::string s;
  int line, col;
};

std::vector<Tok> lex(const std::string& t) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (t[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < t.size()) {
    char c = t[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '_' || t[j] == '\'')) ++j;
      out.push_back({Tok::Ident, t.substr(i, j - i), l, cl});
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t j = i;
      while (j < t.size() && (std::isalnum(static_cast<unsigned char>(t[j])) || t[j] == '.' || t[j] == '\'')) ++j;
      out.push_back({Tok::Number, t.substr(i, j - i), l, cl});
      adv(j - i);
    } else if (std::string("()[]{}|,=/-").find(c) != std::string::npos) {
      out.push_back({Tok::Punct, std::string(1, c), l, cl});
      adv(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Parser {
  std::vector<Tok> toks;
  size_t p = 0;
  const NodeSet& nodes;

  const Tok& peek(size_t k = 0) const { return toks[std::min(p + k, toks.size() - 1)]; }
  [[noreturn]] void fail(const std::string& m) const { throw ParseError(m, peek().line, peek().col); }
  bool is(const std::string& s, size_t k = 0) const {
    return peek(k).k != Tok::End && peek(k).s == s && peek(k).k != Tok::Number;
  }
  void expect(const std::string& s) {
    if (!is(s)) fail("expected '" + s + "' but found '" + peek().s + "'");
    ++p;
  }

  std::string value() {
    if (peek().k != Tok::Ident && peek().k != Tok::Number) fail("expected a value");
    return toks[p++].s;
  }

  Atom atom() {
    if (peek().k != Tok::Ident && peek().k != Tok::Number) fail("expected an atom");
    std::string first = toks[p++].s;
    if (is("=")) {
      ++p;
      if (!nodes.count(first)) fail("unknown variable '" + first + "'");
      return {first, value()};
    }
    std::string v = resolve_symbol(first, nodes);
    if (v.empty()) fail("cannot resolve symbol '" + first + "' to a variable");
    return {v, first};
  }

  std::vector<Atom> atom_list(const std::string& close) {
    std::vector<Atom> out;
    if (is(close)) return out;
    out.push_back(atom());
    while (is(",")) {
      ++p;
      out.push_back(atom());
    }
    return out;
  }

  // after '|': mix of do(...) and plain atoms
  void condition(std::vector<Atom>& doset, std::vector<Atom>& given, const std::string& close) {
    while (true) {
      if (is("do") && is("(", 1)) {
        p += 2;
        auto d = atom_list(")");
        doset.insert(doset.end(), d.begin(), d.end());
        expect(")");
      } else {
        given.push_back(atom());
      }
      if (is(",")) {
        ++p;
        continue;
      }
      if (is(close)) return;
      fail("expected ',' or '" + close + "'");
    }
  }

  bool starts_factor() const {
    const auto& t = peek();
    if (t.k == Tok::Number) return true;
    if (t.k != Tok::Ident && t.k != Tok::Punct) return false;
    if (t.s == "(") return true;
    if (t.s == "sum_" || t.s == "mean_") return true;
    if ((t.s == "P" && is("(", 1)) || (t.s == "E" && is("[", 1))) return true;
    return false;
  }

  Estimand product() {
    std::vector<Estimand> fs;
    if (!starts_factor()) fail("expected an expression");
    while (starts_factor()) {
      bool binder = is("sum_") || is("mean_");
      fs.push_back(factor());
      if (binder) break;  // a binder's body took the rest
    }
    return fs.size() == 1 ? fs[0] : Estimand::product(fs);
  }

  Estimand factor() {
    if (peek().k == Tok::Number) {
      std::string s = toks[p++].s;
      try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return Estimand::constant(v);
      } catch (const std::exception&) {
        --p;
        fail("bad number '" + s + "'");
      }
    }
    if (is("sum_")) {
      ++p;
      expect("{");
      std::vector<Binding> bs;
      for (const auto& a : atom_list("}")) bs.push_back({a.var, a.value});
      expect("}");
      return Estimand::sum(bs, product());
    }
    if (is("mean_")) {
      ++p;
      expect("{");
      Atom a = atom();
      expect("}");
      return Estimand::mean({a.var, a.value}, product());
    }
    if (is("P")) {
      p += 2;
      auto joint = atom_list(")");
      std::vector<Atom> doset, given;
      if (is("|")) {
        ++p;
        condition(doset, given, ")");
      }
      expect(")");
      if (joint.empty()) fail("empty probability term");
      if (doset.empty()) return Estimand::term(joint, given);
      return Estimand::do_term(joint, doset, given);
    }
    if (is("E")) {
      p += 2;
      if (peek().k != Tok::Ident || !nodes.count(peek().s)) fail("expected an outcome variable");
      std::string target = toks[p++].s;
      std::vector<Atom> doset, given;
      if (is("|")) {
        ++p;
        condition(doset, given, "]");
      }
      expect("]");
      return Estimand::expectation(target, given, doset);
    }
    expect("(");
    Estimand lhs = product();
    expect(")");
    if (is("/") || is("-")) {
      bool div = is("/");
      ++p;
      expect("(");
      Estimand rhs = product();
      expect(")");
      return div ? Estimand::quotient(lhs, rhs) : Estimand::difference(lhs, rhs);
    }
    return lhs;
  }
};

}  // namespace

Estimand parse_estimand(const std::string& text, const NodeSet& nodes) {
  Parser ps{lex(text), 0, nodes};
  Estimand e = ps.product();
  if (ps.peek().k != Tok::End) ps.fail("trailing input '" + ps.peek().s + "'");
  return e;
}

}  // namespace causid
