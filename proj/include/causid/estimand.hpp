#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "causid/graph.hpp"

namespace causid {

// Value is a symbol ("a1", "y", "c'") or a literal domain token ("0").
struct Atom {
  std::string var;
  std::string value;
  auto operator<=>(const Atom&) const = default;
};

struct Binding {
  std::string var;
  std::string symbol;
  auto operator<=>(const Binding&) const = default;
};

struct Node;

class Estimand {
 public:
  enum class Kind { Term, DoTerm, Sum, Product, Quotient, Difference, Expectation, Mean, Constant };

  Estimand();  // constant 1
  explicit Estimand(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  static Estimand term(std::vector<Atom> joint, std::vector<Atom> given = {});
  static Estimand do_term(std::vector<Atom> joint, std::vector<Atom> doset, std::vector<Atom> given = {});
  static Estimand sum(std::vector<Binding> bound, Estimand body);
  static Estimand product(std::vector<Estimand> factors);
  static Estimand quotient(Estimand num, Estimand den);
  static Estimand difference(Estimand lhs, Estimand rhs);
  static Estimand expectation(std::string target, std::vector<Atom> given = {}, std::vector<Atom> doset = {});
  // sum over t in dom(var) of number(t) * body, with t bound to symbol
  static Estimand mean(Binding b, Estimand body);
  static Estimand constant(double v);

  Kind kind() const;
  const Node& node() const { return *n_; }

  bool is_constant(double v) const;
  bool operator==(const Estimand& o) const;

 private:
  std::shared_ptr<const Node> n_;
};

struct Term {
  std::vector<Atom> joint, given;
};
struct DoTerm {
  std::vector<Atom> joint, doset, given;
};
struct Sum {
  std::vector<Binding> bound;
  Estimand body;
};
struct Product {
  std::vector<Estimand> factors;
};
struct Quotient {
  Estimand num, den;
};
struct Difference {
  Estimand lhs, rhs;
};
struct Expectation {
  std::string target;
  std::vector<Atom> given, doset;
};
struct Mean {
  Binding bound;
  Estimand body;
};
struct Constant {
  double value;
};

struct Node {
  std::variant<Term, DoTerm, Sum, Product, Quotient, Difference, Expectation, Mean, Constant> v;
};

template <class T>
const T* as(const Estimand& e) {
  return std::get_if<T>(&e.node().v);
}

enum class Format { Text, Latex, Structured };

// nodes, when given, decides whether a symbol can be printed bare.
std::string render(const Estimand& e, Format f = Format::Text, const NodeSet* nodes = nullptr);

// Resolves a bare symbol to a variable: exact case-insensitive match with primes
// stripped, then with trailing digits stripped. Empty when ambiguous or unknown.
std::string resolve_symbol(const std::string& symbol, const NodeSet& nodes);
bool symbol_belongs(const std::string& symbol, const std::string& var);

Estimand parse_estimand(const std::string& text, const NodeSet& nodes);

std::set<std::string> free_symbols(const Estimand& e);
std::set<std::string> all_symbols(const Estimand& e);
std::set<std::string> variables_of(const Estimand& e);
bool contains_do(const Estimand& e);

// Capture-avoiding renaming of free symbols.
Estimand substitute(const Estimand& e, const std::map<std::string, std::string>& sub);
// Renames bound symbols that shadow an outer one (c -> c').
Estimand hygienic(const Estimand& e);
std::string fresh_symbol(const std::string& base, const std::set<std::string>& used);

// Observational simplification. Value preserving on every model compatible with g.
Estimand simplify(const Estimand& e, const Admg& g);

// Small builders
Estimand product_of(std::vector<Estimand> factors);  // collapses 0/1 factors
Estimand sum_of(std::vector<Binding> bound, Estimand body);

}  // namespace causid
