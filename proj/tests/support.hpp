#pragma once

#include <cmath>
#include <map>
#include <string>

#include "json.hpp"

#include "causid/io.hpp"
#include "causid/scm.hpp"

#ifndef CAUSID_FIXTURES
#error "CAUSID_FIXTURES must point at the fixtures directory"
#endif

namespace support {

inline std::string fixture(const std::string& rel) { return std::string(CAUSID_FIXTURES) + "/" + rel; }

inline causid::Admg graph(const std::string& name) { return causid::load_graph(fixture("graphs/" + name + ".g")); }
inline causid::DiscreteScm model(const std::string& name) {
  return causid::load_model(fixture("models/" + name + ".json"));
}

inline const nlohmann::json& cases() {
  static nlohmann::json j = nlohmann::json::parse(causid::read_file(fixture("cases.json")));
  return j;
}

inline const nlohmann::json& case_of(const std::string& section, const std::string& g) {
  for (const auto& c : cases().at(section))
    if (c.at("graph") == g) return c;
  throw std::runtime_error("no case " + section + "/" + g);
}

using Env = std::map<std::string, std::string>;

inline double eval(const causid::Estimand& e, const causid::DiscreteScm& m, const Env& env) {
  return causid::eval_estimand(e, causid::joint(m), env);
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

}  // namespace support
