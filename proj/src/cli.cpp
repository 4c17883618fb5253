#include "causid/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "causid/counterfactual.hpp"
#include "causid/criteria.hpp"
#include "causid/fuzz.hpp"
#include "causid/identify.hpp"
#include "causid/io.hpp"
#include "causid/path_effects.hpp"
#include "causid/scm.hpp"

namespace causid {

namespace {

using nlohmann::json;

struct Outcome {
  std::string verdict;  // identifiable, not-identifiable, ok, not-admissible, failed
  std::optional<Estimand> estimand;
  std::optional<Witness> witness;
  std::optional<double> value;
  std::vector<std::string> diagnostics;
  std::vector<std::string> lines;  // extra text output (check, fuzz)
};

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

json witness_json(const Witness& w) {
  json j;
  if (auto h = std::get_if<Hedge>(&w)) {
    j = {{"kind", "hedge"}, {"f", h->f}, {"f_prime", h->f_prime}};
  } else if (auto p = std::get_if<PseWitness>(&w)) {
    j = {{"kind", p->kind == PseWitness::Kind::RecantingWitness ? "recanting-witness" : "recanting-district"},
         {"nodes", p->nodes}};
  } else {
    const auto& c = std::get<CtfWitness>(w);
    j = {{"kind", "counterfactual"}, {"nodes", c.nodes}, {"reason", c.reason}};
  }
  j["text"] = render_witness(w);
  return j;
}

void emit(std::ostream& out, const std::string& format, const Outcome& o, const NodeSet* nodes) {
  if (format == "structured") {
    json j;
    j["verdict"] = o.verdict;
    j["estimand"] = o.estimand ? json::parse(render(*o.estimand, Format::Structured, nodes)) : json(nullptr);
    j["witness"] = o.witness ? witness_json(*o.witness) : json(nullptr);
    j["value"] = o.value ? json(*o.value) : json(nullptr);
    std::vector<std::string> diag = o.diagnostics;
    diag.insert(diag.end(), o.lines.begin(), o.lines.end());
    j["diagnostics"] = diag;
    out << j.dump() << "\n";
    return;
  }
  Format f = format == "latex" ? Format::Latex : Format::Text;
  for (const auto& l : o.lines) out << l << "\n";
  if (o.estimand) out << render(*o.estimand, f, nodes) << "\n";
  if (o.witness) out << "not identifiable: " << render_witness(*o.witness) << "\n";
  if (o.value) out << number(*o.value) << "\n";
  for (const auto& d : o.diagnostics) out << "# " << d << "\n";
}

Outcome from(const IdentResult& r) {
  Outcome o;
  o.verdict = r.identifiable() ? "identifiable" : "not-identifiable";
  o.estimand = r.estimand;
  o.witness = r.witness;
  o.diagnostics = r.diagnostics;
  return o;
}

int status(const Outcome& o) {
  if (o.verdict == "identifiable" || o.verdict == "ok") return 0;
  if (o.verdict == "not-identifiable" || o.verdict == "not-admissible") return 2;
  return 1;
}

NodeSet split_set(const std::string& s) {
  NodeSet out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part.erase(0, part.find_first_not_of(" \t{"));
    part.erase(part.find_last_not_of(" \t}") + 1);
    if (!part.empty()) out.insert(part);
  }
  return out;
}

IdentResult identify_query(const Admg& g, const Query& q) {
  if (q.counterfactual)
    return q.delta.empty() ? identify_ctf(g, q.gamma) : identify_ctf_conditional(g, q.gamma, q.delta);
  if (q.given.empty()) return identify_atoms(g, q.doset, q.outcome);
  return identify_conditional(g, q.doset, q.outcome, q.given);
}

Conjunction plain(const std::vector<Atom>& atoms, const std::vector<Atom>& doset) {
  Conjunction c;
  for (const auto& a : atoms) {
    CtfAtom x{a.var, a.value, {}};
    for (const auto& d : doset) x.subscript.push_back({d.var, d.value, nullptr});
    c.push_back(x);
  }
  return c;
}

double oracle_value(const DiscreteScm& m, const Query& q) {
  if (q.counterfactual) return ctf_probability(m, q.gamma, q.delta);
  return ctf_probability(m, plain(q.outcome, q.doset), plain(q.given, q.doset));
}

Outcome check_graph(const Admg& g, const std::string& a, const std::string& y, const std::string& set) {
  Outcome o;
  o.verdict = "ok";
  o.lines.push_back("nodes: " + format_set(g.nodes()));
  o.lines.push_back(std::string("markovian: ") + (g.is_markovian() ? "yes" : "no"));
  std::string order;
  for (const auto& v : topological_order(g)) order += (order.empty() ? "" : " ") + v;
  o.lines.push_back("order: " + order);
  std::string cc;
  for (const auto& c : c_components(g)) cc += (cc.empty() ? "" : " ") + format_set(c);
  o.lines.push_back("districts: " + cc);
  if (a.empty() || y.empty()) return o;
  g.require(a);
  g.require(y);
  if (!set.empty()) {
    NodeSet c = split_set(set);
    auto bd = is_backdoor_admissible(g, a, y, c);
    o.lines.push_back("back-door " + format_set(c) + ": " + (bd.admissible ? "admissible" : "not admissible"));
    for (const auto& v : bd.violations) o.lines.push_back("  " + v.reason + " " + v.path);
    auto fd = is_frontdoor_admissible(g, a, y, c);
    o.lines.push_back("front-door " + format_set(c) + ": " + (fd.admissible ? "admissible" : "not admissible"));
    for (const auto& v : fd.violations) o.lines.push_back("  " + v.reason + " " + v.path);
    if (!bd.admissible && !fd.admissible) o.verdict = "not-admissible";
    return o;
  }
  auto sets = enumerate_backdoor_sets(g, a, y, 3);
  if (sets.empty()) o.lines.push_back("back-door sets: none");
  for (const auto& s : sets) o.lines.push_back("back-door set " + format_set(s.nodes) + (s.minimal ? " (minimal)" : ""));
  for (const auto& iv : find_instruments(g, a, y))
    o.lines.push_back("instrument " + iv.instrument + " given " + format_set(iv.conditioning));
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"causal effect identification"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "text, latex or structured")
      ->check(CLI::IsMember({"text", "latex", "structured"}))
      ->capture_default_str();

  std::string graph_file, query, model_file, a, y, active = "a1", baseline = "a0", yval, effect = "nde", covariates,
                                                        set;
  std::vector<std::string> paths;
  bool use_oracle = false, term_only = false, has_cov = false;
  int graphs = 200;
  std::uint64_t seed = 7;
  double tolerance = 1e-9;

  auto* identify_cmd = app.add_subcommand("identify", "identify a causal or counterfactual query");
  identify_cmd->add_option("--graph", graph_file)->required();
  identify_cmd->add_option("--query", query)->required();

  auto* ctf_cmd = app.add_subcommand("ctf", "identify a counterfactual query");
  ctf_cmd->add_option("--graph", graph_file)->required();
  ctf_cmd->add_option("--query", query)->required();

  auto* pse_cmd = app.add_subcommand("pse", "path-specific effect along the given paths");
  pse_cmd->add_option("--graph", graph_file)->required();
  pse_cmd->add_option("--path", paths, "A->M->Y, repeatable")->required();
  pse_cmd->add_option("--active", active)->capture_default_str();
  pse_cmd->add_option("--baseline", baseline)->capture_default_str();
  pse_cmd->add_option("--value", yval, "outcome value, defaults to the outcome's symbol");
  pse_cmd->add_flag("--term", term_only, "only the counterfactual term, not the contrast");

  auto* med_cmd = app.add_subcommand("mediation", "natural direct or indirect effect");
  med_cmd->add_option("--graph", graph_file)->required();
  med_cmd->add_option("--treatment", a)->required();
  med_cmd->add_option("--outcome", y)->required();
  med_cmd->add_option("--effect", effect)->check(CLI::IsMember({"nde", "nie"}))->capture_default_str();
  med_cmd->add_option("--active", active)->capture_default_str();
  med_cmd->add_option("--baseline", baseline)->capture_default_str();
  med_cmd->add_option("--covariates", covariates, "comma separated; empty string for none")
      ->each([&](const std::string&) { has_cov = true; });

  auto* check_cmd = app.add_subcommand("check", "validate a graph and report adjustment options");
  check_cmd->add_option("--graph", graph_file)->required();
  check_cmd->add_option("--treatment", a);
  check_cmd->add_option("--outcome", y);
  check_cmd->add_option("--set", set, "candidate adjustment set, comma separated");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a query against a model");
  eval_cmd->add_option("--graph", graph_file);
  eval_cmd->add_option("--model", model_file)->required();
  eval_cmd->add_option("--query", query)->required();
  eval_cmd->add_flag("--oracle", use_oracle, "compute from the model directly");
  eval_cmd->add_option("--tolerance", tolerance, "with --oracle, also compare with the estimand");

  auto* fuzz_cmd = app.add_subcommand("fuzz", "conformance harness on random graphs");
  fuzz_cmd->add_option("--graphs", graphs)->capture_default_str();
  fuzz_cmd->add_option("--seed", seed)->capture_default_str();
  fuzz_cmd->add_option("--tolerance", tolerance)->capture_default_str();

  if (!args.empty() && args[0].rfind("-", 0) != 0) {
    bool known = false;
    for (const auto* s : app.get_subcommands({})) known |= s->get_name() == args[0];
    if (!known) {
      err << "error: " << Error(ErrorCode::UnknownSubcommand, args[0]).what() << "\n";
      return 1;
    }
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::RequiredError& e) {
    err << "error: " << Error(ErrorCode::MissingFlag, e.what()).what() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    Admg g;
    if (!graph_file.empty()) g = load_graph(graph_file);
    Outcome o;

    if (identify_cmd->parsed() || ctf_cmd->parsed()) {
      Query q = parse_query(query, g.nodes());
      if (ctf_cmd->parsed() && !q.counterfactual)
        throw Error(ErrorCode::InvalidArgument, "ctf expects a counterfactual query such as P(Y[A=a1]=y | A=a0)");
      o = from(identify_query(g, q));
    } else if (pse_cmd->parsed()) {
      std::vector<Path> ps;
      for (const auto& p : paths) ps.push_back(parse_path(p));
      PathSet pi = make_path_set(g, ps.front().front(), ps.front().back(), ps);
      o = from(term_only ? pse_term_estimand(g, pi, active, baseline, yval)
                         : pse_estimand(g, pi, active, baseline, yval));
    } else if (med_cmd->parsed()) {
      std::optional<NodeSet> z;
      if (has_cov) z = split_set(covariates);
      o = from(effect == "nde" ? nde_estimand(g, a, y, active, baseline, z)
                               : nie_estimand(g, a, y, active, baseline, z));
    } else if (check_cmd->parsed()) {
      o = check_graph(g, a, y, set);
    } else if (eval_cmd->parsed()) {
      DiscreteScm m = load_model(model_file);
      if (!graph_file.empty() && !(g == m.graph))
        throw Error(ErrorCode::InvalidModel, "model edges differ from " + graph_file);
      g = m.graph;
      Query q = parse_query(query, g.nodes());
      if (use_oracle) {
        o.verdict = "ok";
        o.value = oracle_value(m, q);
        IdentResult r = identify_query(g, q);
        if (r.identifiable()) {
          double v = eval_estimand(*r.estimand, joint(m));
          o.diagnostics.push_back("estimand value " + number(v));
          if (std::fabs(v - *o.value) > tolerance) {
            o.verdict = "failed";
            o.diagnostics.push_back("estimand and oracle differ by more than " + number(tolerance));
          }
        } else {
          o.diagnostics.push_back("not identifiable from the graph: " + render_witness(*r.witness));
        }
      } else {
        o = from(identify_query(g, q));
        if (o.estimand) {
          EvalDiagnostics diag;
          o.value = eval_estimand(*o.estimand, joint(m), {}, &diag);
          o.diagnostics.insert(o.diagnostics.end(), diag.messages.begin(), diag.messages.end());
        } else {
          // no estimand to evaluate; --oracle gives the model's own value
          emit(out, format, o, &g.nodes());
          err << "error: query is not identifiable; rerun with --oracle for the model value\n";
          return 1;
        }
      }
    } else if (fuzz_cmd->parsed()) {
      o.verdict = "ok";
      for (bool markovian : {true, false}) {
        FuzzReport r = run_fuzz(graphs, seed, markovian, tolerance);
        o.lines.push_back(std::string(markovian ? "markovian" : "semi-markovian") + ": " + std::to_string(r.graphs) +
                          " graphs, " + std::to_string(r.identifiable) + " identifiable, " +
                          std::to_string(r.checks) + " checks, max error " + number(r.max_error));
        for (const auto& f : r.failures) o.lines.push_back("  FAIL " + f);
        if (!r.ok()) o.verdict = "failed";
      }
    }
    emit(out, format, o, &g.nodes());
    return status(o);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace causid
