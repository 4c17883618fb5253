#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "causid/cli.hpp"
#include "causid/counterfactual.hpp"
#include "causid/criteria.hpp"
#include "causid/fuzz.hpp"
#include "causid/identify.hpp"
#include "causid/io.hpp"
#include "causid/path_effects.hpp"
#include "causid/scm.hpp"

namespace py = pybind11;
using namespace causid;

namespace {

// What python sees for a verdict.
struct PyResult {
  IdentResult r;
  NodeSet nodes;

  bool identifiable() const { return r.identifiable(); }
  std::optional<std::string> estimand(Format f) const {
    if (!r.estimand) return std::nullopt;
    return render(*r.estimand, f, &nodes);
  }
  std::optional<std::string> witness() const {
    if (!r.witness) return std::nullopt;
    return render_witness(*r.witness);
  }
  py::dict witness_detail() const {
    py::dict d;
    if (!r.witness) return d;
    if (auto h = std::get_if<Hedge>(&*r.witness)) {
      d["kind"] = "hedge";
      d["f"] = h->f;
      d["f_prime"] = h->f_prime;
    } else if (auto p = std::get_if<PseWitness>(&*r.witness)) {
      d["kind"] = p->kind == PseWitness::Kind::RecantingWitness ? "recanting-witness" : "recanting-district";
      d["nodes"] = p->nodes;
    } else {
      const auto& c = std::get<CtfWitness>(*r.witness);
      d["kind"] = "counterfactual";
      d["nodes"] = c.nodes;
      d["reason"] = c.reason;
    }
    return d;
  }
  double value(const DiscreteScm& m, const std::map<std::string, std::string>& env) const {
    if (!r.estimand) throw Error(ErrorCode::InvalidArgument, "not identifiable; no estimand to evaluate");
    return eval_estimand(*r.estimand, joint(m), env);
  }
};

PyResult wrap(IdentResult r, const Admg& g) { return {std::move(r), g.nodes()}; }

PyResult identify_text(const Admg& g, const std::string& query) {
  Query q = parse_query(query, g.nodes());
  if (q.counterfactual)
    return wrap(q.delta.empty() ? identify_ctf(g, q.gamma) : identify_ctf_conditional(g, q.gamma, q.delta), g);
  if (q.given.empty()) return wrap(identify_atoms(g, q.doset, q.outcome), g);
  return wrap(identify_conditional(g, q.doset, q.outcome, q.given), g);
}

std::vector<Path> parse_paths(const std::vector<std::string>& paths) {
  std::vector<Path> out;
  for (const auto& p : paths) out.push_back(parse_path(p));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no paths given");
  return out;
}

EffectKind effect_kind(const std::string& s) {
  static const std::map<std::string, EffectKind> kinds{{"TV", EffectKind::TV},   {"TE", EffectKind::TE},
                                                       {"NDE", EffectKind::NDE}, {"NIE", EffectKind::NIE},
                                                       {"PSE", EffectKind::PSE}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw Error(ErrorCode::InvalidArgument, "unknown effect " + s);
  return it->second;
}

}  // namespace

PYBIND11_MODULE(_causid, m) {
  m.doc() = "causal effect identification on ADMGs";

  // messages start with the error code, e.g. "ParseError: ..."
  static py::exception<Error> error(m, "CausidError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<Admg>(m, "Graph")
      .def_static("parse", &parse_graph, py::arg("text"))
      .def_static("load", &load_graph, py::arg("path"))
      .def_property_readonly("nodes", &Admg::nodes)
      .def_property_readonly("directed", &Admg::directed)
      .def_property_readonly("bidirected", &Admg::bidirected)
      .def("is_markovian", &Admg::is_markovian)
      .def("serialize", &serialize_graph)
      .def("topological_order", &topological_order)
      .def("c_components", &c_components)
      .def("m_separated", &m_separated, py::arg("x"), py::arg("y"), py::arg("z") = NodeSet{})
      .def("ancestors", &ancestors)
      .def("descendants", &descendants)
      .def("__eq__", &Admg::operator==)
      .def("__repr__", [](const Admg& g) { return "<Graph " + format_set(g.nodes()) + ">"; });

  py::class_<PyResult>(m, "Result")
      .def_property_readonly("identifiable", &PyResult::identifiable)
      .def_property_readonly("estimand", [](const PyResult& r) { return r.estimand(Format::Text); })
      .def_property_readonly("latex", [](const PyResult& r) { return r.estimand(Format::Latex); })
      .def_property_readonly("structured", [](const PyResult& r) { return r.estimand(Format::Structured); })
      .def_property_readonly("witness", &PyResult::witness)
      .def_property_readonly("witness_detail", &PyResult::witness_detail)
      .def_property_readonly("diagnostics", [](const PyResult& r) { return r.r.diagnostics; })
      .def("value", &PyResult::value, py::arg("model"), py::arg("env") = std::map<std::string, std::string>{})
      .def("__repr__", [](const PyResult& r) {
        return r.identifiable() ? "<Result " + *r.estimand(Format::Text) + ">" : "<Result " + *r.witness() + ">";
      });

  m.def("identify", &identify_text, py::arg("graph"), py::arg("query"),
        "Causal query P(Y|do(A)) or counterfactual query P(Y[A=a1]=y | A=a0).");
  m.def(
      "identify_effect",
      [](const Admg& g, const NodeSet& x, const NodeSet& y) { return wrap(identify(g, x, y), g); },
      py::arg("graph"), py::arg("treatments"), py::arg("outcomes"));
  m.def(
      "pse",
      [](const Admg& g, const std::vector<std::string>& paths, const std::string& active, const std::string& baseline,
         bool term) {
        auto ps = parse_paths(paths);
        PathSet pi = make_path_set(g, ps.front().front(), ps.front().back(), ps);
        return wrap(term ? pse_term_estimand(g, pi, active, baseline) : pse_estimand(g, pi, active, baseline), g);
      },
      py::arg("graph"), py::arg("paths"), py::arg("active") = "a1", py::arg("baseline") = "a0",
      py::arg("term") = false);
  m.def(
      "mediation",
      [](const Admg& g, const std::string& a, const std::string& y, const std::string& effect,
         const std::string& active, const std::string& baseline, std::optional<NodeSet> covariates) {
        if (effect != "nde" && effect != "nie") throw Error(ErrorCode::InvalidArgument, "effect must be nde or nie");
        return wrap(effect == "nde" ? nde_estimand(g, a, y, active, baseline, covariates)
                                    : nie_estimand(g, a, y, active, baseline, covariates),
                    g);
      },
      py::arg("graph"), py::arg("treatment"), py::arg("outcome"), py::arg("effect") = "nde",
      py::arg("active") = "a1", py::arg("baseline") = "a0", py::arg("covariates") = py::none());

  m.def(
      "backdoor_sets",
      [](const Admg& g, const std::string& a, const std::string& y, int max_size) {
        std::vector<NodeSet> out;
        for (const auto& s : enumerate_backdoor_sets(g, a, y, max_size)) out.push_back(s.nodes);
        return out;
      },
      py::arg("graph"), py::arg("treatment"), py::arg("outcome"), py::arg("max_size") = -1);
  m.def(
      "backdoor_violations",
      [](const Admg& g, const std::string& a, const std::string& y, const NodeSet& c) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : is_backdoor_admissible(g, a, y, c).violations) out.push_back({v.reason, v.path});
        return out;
      },
      py::arg("graph"), py::arg("treatment"), py::arg("outcome"), py::arg("adjustment"));
  m.def(
      "instruments",
      [](const Admg& g, const std::string& a, const std::string& y) {
        std::vector<std::pair<std::string, NodeSet>> out;
        for (const auto& i : find_instruments(g, a, y)) out.push_back({i.instrument, i.conditioning});
        return out;
      },
      py::arg("graph"), py::arg("treatment"), py::arg("outcome"));

  py::class_<DiscreteScm>(m, "Model")
      .def_static("load", &load_model, py::arg("path"))
      .def_static("from_json", &model_from_json, py::arg("text"))
      .def_static("random", &random_scm, py::arg("graph"), py::arg("seed"), py::arg("domain_size") = 2)
      .def_readonly("graph", &DiscreteScm::graph)
      .def("to_json", &model_to_json);

  m.def(
      "probability",
      [](const DiscreteScm& model, const std::map<std::string, std::string>& event,
         const std::map<std::string, std::string>& doset) { return intervene(model, doset).prob(event); },
      py::arg("model"), py::arg("event"), py::arg("do") = std::map<std::string, std::string>{},
      "P(event | do(...)) computed from the model.");
  m.def(
      "ctf_probability",
      [](const DiscreteScm& model, const std::string& query) {
        Query q = parse_query(query, model.graph.nodes());
        if (!q.counterfactual) throw Error(ErrorCode::InvalidArgument, "expected a counterfactual query");
        return ctf_probability(model, q.gamma, q.delta);
      },
      py::arg("model"), py::arg("query"), "Values in the query must be domain tokens.");
  m.def(
      "pse_value",
      [](const DiscreteScm& model, const std::vector<std::string>& paths, const std::string& a1, const std::string& a0,
         const std::string& y) {
        auto ps = parse_paths(paths);
        return pse_value(model, ps.front().front(), ps.front().back(), ps, a1, a0, y);
      },
      py::arg("model"), py::arg("paths"), py::arg("a1"), py::arg("a0"), py::arg("y"));
  m.def(
      "effect",
      [](const DiscreteScm& model, const std::string& kind, const std::string& treatment, const std::string& outcome,
         const std::string& a1, const std::string& a0, const std::string& y, const std::vector<std::string>& paths) {
        std::vector<Path> ps;
        for (const auto& p : paths) ps.push_back(parse_path(p));
        return effect_measure(model, effect_kind(kind), {treatment, outcome, a1, a0, y, ps});
      },
      py::arg("model"), py::arg("kind"), py::arg("treatment"), py::arg("outcome"), py::arg("a1"), py::arg("a0"),
      py::arg("y") = "1", py::arg("paths") = std::vector<std::string>{});
  m.def(
      "evaluate",
      [](const std::string& estimand, const DiscreteScm& model, const std::map<std::string, std::string>& env) {
        return eval_estimand(parse_estimand(estimand, model.graph.nodes()), joint(model), env);
      },
      py::arg("estimand"), py::arg("model"), py::arg("env") = std::map<std::string, std::string>{});

  m.def(
      "fuzz",
      [](int graphs, std::uint64_t seed, bool markovian) {
        auto r = run_fuzz(graphs, seed, markovian);
        py::dict d;
        d["graphs"] = r.graphs;
        d["identifiable"] = r.identifiable;
        d["checks"] = r.checks;
        d["max_error"] = r.max_error;
        d["failures"] = r.failures;
        return d;
      },
      py::arg("graphs") = 200, py::arg("seed") = 7, py::arg("markovian") = true);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line front end; returns (exit status, stdout, stderr).");
}
