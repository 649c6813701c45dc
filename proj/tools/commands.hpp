#pragma once

// Subcommand implementations for the qpragma CLI. Every command writes to the
// given stream and returns the process exit code:
//   0 success, 1 usage error, 2 parse error, 3 model error,
//   4 axiom or consistency failure.

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpragma/qpragma.hpp"

namespace qpragma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitModel = 3;
inline constexpr int kExitFailure = 4;

struct RunConfig {
  std::string model_path = "qubit";
  double tolerance = 1e-9;
  bool tolerance_set = false;
  std::uint64_t seed = 0;
  int max_depth = 3;
  std::string output_format = "text";
  std::string state;
  int trials = 200;
  std::vector<std::string> properties;

  void validate() const {
    if (!(tolerance > 0.0 && tolerance <= 1e-3)) throw DomainError("--tol must lie in (0, 1e-3]");
    if (max_depth < 0 || max_depth > 6) throw DomainError("--depth must lie in [0, 6]");
    if (output_format != "text" && output_format != "json" && output_format != "dot") {
      throw DomainError("--format must be text, json or dot");
    }
  }
};

inline PropertyModel with_tolerance(const PropertyModel& m, Tolerance tol) {
  PropertyModel out(m.dim(), tol);
  for (const auto& [name, v] : m.properties()) out.add(name, v);
  return out;
}

/// "qubit" and "qutrit" name the built-in models; anything else is a path.
inline PropertyModel resolve_model(const RunConfig& cfg) {
  PropertyModel m = (cfg.model_path == "qubit" || cfg.model_path == "qutrit")
                        ? standard_model(cfg.model_path)
                        : load_model(cfg.model_path);
  if (cfg.tolerance_set) m = with_tolerance(m, Tolerance(cfg.tolerance));
  return m;
}

/// "vector:[re,im;re,im;...]" or "ray-of:<property>".
inline StateRef parse_state(const PropertyModel& m, const std::string& text) {
  const std::string ray_prefix = "ray-of:";
  const std::string vec_prefix = "vector:";
  if (text.rfind(ray_prefix, 0) == 0) return ray_of(m, text.substr(ray_prefix.size()));
  if (text.rfind(vec_prefix, 0) != 0) {
    throw ParseError("state must be 'vector:[...]' or 'ray-of:<name>'", 0);
  }
  std::string body = text.substr(vec_prefix.size());
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
    throw ParseError("state vector must be bracketed", vec_prefix.size());
  }
  body = body.substr(1, body.size() - 2);
  std::vector<Scalar> entries;
  std::stringstream rows(body);
  std::string entry;
  while (std::getline(rows, entry, ';')) {
    std::stringstream parts(entry);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(parts >> re >> comma >> im) || comma != ',') {
      throw ParseError("state entry '" + entry + "' is not 're,im'", vec_prefix.size());
    }
    parts >> std::ws;
    if (!parts.eof()) throw ParseError("trailing text in state entry '" + entry + "'", vec_prefix.size());
    entries.emplace_back(re, im);
  }
  if (static_cast<int>(entries.size()) != m.dim()) {
    throw DimensionError("state has " + std::to_string(entries.size()) + " entries, model dimension is " +
                         std::to_string(m.dim()));
  }
  Vector v(m.dim());
  for (int i = 0; i < m.dim(); ++i) v[i] = entries[static_cast<std::size_t>(i)];
  return StateRef::normalized(v);
}

inline std::string dims_text(const Extension& e) {
  if (e.is_empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(e.components()[i].dim());
  }
  return out + "}";
}

inline std::string classification_of(const StateClassification& c, const std::string& name) {
  if (c.actual.count(name)) return "actual";
  if (c.nonactual.count(name)) return "nonactual";
  return "potential";
}

inline int cmd_eval(const RunConfig& cfg, const std::string& formula_text, std::ostream& out) {
  const PropertyModel m = resolve_model(cfg);
  const Formula f = parse(formula_text);
  if (cfg.state.empty()) throw DomainError("eval needs --state");
  const StateRef s = parse_state(m, cfg.state);
  const Extension ext = pragmatic_extension(m, f);
  const Justification v = contains_state(ext, s, m.tolerance()) ? Justification::J : Justification::U;
  const StateClassification c = classify(m, s);
  const auto props = properties_of(f);
  if (cfg.output_format == "json") {
    nlohmann::json classes = nlohmann::json::object();
    for (const auto& p : props) classes[p] = classification_of(c, p);
    const nlohmann::json j = {{"formula", print(f)},
                              {"state", vector_to_json(s.vector())},
                              {"value", std::string(1, to_char(v))},
                              {"extension_dims", ext.component_dims()},
                              {"classification", classes}};
    out << j.dump(2) << "\n";
  } else {
    out << "formula: " << print(f) << "\n";
    out << "value: " << to_char(v) << "\n";
    out << "extension components: " << ext.size() << " dims " << dims_text(ext) << "\n";
    for (const auto& p : props) out << "  " << p << ": " << classification_of(c, p) << "\n";
  }
  return kExitOk;
}

inline int cmd_validity(const RunConfig& cfg, const std::string& formula_text, std::ostream& out) {
  const PropertyModel m = resolve_model(cfg);
  const Formula f = parse(formula_text);
  const Extension ext = pragmatic_extension(m, f);
  const std::string verdict = is_full(ext) ? "p-valid" : ext.is_empty() ? "p-invalid" : "contingent";
  if (cfg.output_format == "json") {
    const nlohmann::json j = {
        {"formula", print(f)}, {"verdict", verdict}, {"extension_dims", ext.component_dims()}};
    out << j.dump(2) << "\n";
  } else {
    out << print(f) << ": " << verdict << "\n";
  }
  return kExitOk;
}

inline int cmd_decide(const RunConfig& cfg, const std::string& formula_text, std::ostream& out) {
  const PropertyModel m = resolve_model(cfg);
  const Formula f = parse(formula_text);
  const DecidabilityReport r = decide(m, f);
  if (cfg.output_format == "json") {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& step : r.criterion_trace) {
      trace.push_back({{"formula", step.formula},
                       {"criterion", step.criterion},
                       {"closed", step.closed},
                       {"note", step.note}});
    }
    const nlohmann::json j = {{"formula", print(f)},
                              {"decidable", r.decidable},
                              {"extension_dims", r.witness_extension.component_dims()},
                              {"trace", trace}};
    out << j.dump(2) << "\n";
  } else {
    out << print(f) << ": " << (r.decidable ? "p-decidable" : "not p-decidable") << "\n";
    for (const auto& step : r.criterion_trace) {
      out << "  " << step.criterion << (step.closed ? " closed   " : " open     ") << step.formula
          << "  [" << step.note << "]\n";
    }
  }
  return kExitOk;
}

inline int cmd_quotient(const RunConfig& cfg, std::ostream& out) {
  const PropertyModel m = resolve_model(cfg);
  const auto props = cfg.properties.empty() ? m.names() : cfg.properties;
  for (const auto& p : props) m.property(p);
  const auto universe = enumerate_formulas(props, cfg.max_depth, Fragment::PhiAD);
  const QuotientLattice q = build_quotient(m, universe);
  const IsomorphismReport iso = check_isomorphism(m, q);
  if (cfg.output_format == "dot") {
    out << quotient_to_dot(q);
  } else if (cfg.output_format == "json") {
    nlohmann::json j = quotient_to_json(q);
    j["universe_size"] = universe.size();
    j["isomorphism"] = {{"ok", iso.ok()},
                        {"well_defined", iso.well_defined},
                        {"injective", iso.injective},
                        {"order_preserved", iso.order_preserved},
                        {"unique_elementary", iso.unique_elementary},
                        {"operations_commute", iso.operations_commute},
                        {"problems", iso.problems}};
    out << j.dump(2) << "\n";
  } else {
    out << "universe: " << universe.size() << " formulas, " << q.classes.size() << " classes\n";
    for (std::size_t i = 0; i < q.classes.size(); ++i) {
      const auto& c = q.classes[i];
      out << "  [" << i << "] " << print(c.representative) << "  dim " << c.subspace().dim() << ", "
          << c.members.size() << " members\n";
    }
    out << "isomorphism: " << (iso.ok() ? "ok" : "FAILED") << "\n";
    for (const auto& p : iso.problems) out << "  " << p << "\n";
  }
  return iso.ok() ? kExitOk : kExitFailure;
}

inline int cmd_axioms(const RunConfig& cfg, std::ostream& out) {
  const PropertyModel m = resolve_model(cfg);
  const auto pool = default_pool(m);
  const AxiomReport report = verify_axioms(m, pool, cfg.trials, cfg.seed);
  const AxiomReport control =
      verify_axioms(m, pool, cfg.trials, cfg.seed, {distributivity_control()});
  const CounterexampleReport tertium = find_tertium_counterexample(m, cfg.seed);
  const CounterexampleReport disjunction = find_nonclosed_disjunction(m);
  const CounterexampleReport distributivity = find_distributivity_counterexample(m);
  if (cfg.output_format == "json") {
    nlohmann::json j = axiom_report_to_json(report);
    j["control"] = axiom_report_to_json(control)["schemata"][0];
    j["counterexamples"] = {counterexample_to_json(tertium), counterexample_to_json(disjunction),
                            counterexample_to_json(distributivity)};
    out << j.dump(2) << "\n";
  } else {
    out << "seed: " << cfg.seed << "\n";
    out << "pool: " << pool.size() << " formulas, " << cfg.trials << " instances per schema\n";
    for (const auto& s : report.schemata) {
      out << "  " << s.schema_id << ": " << s.instances_checked << " checked, " << s.failures.size()
          << " not p-valid, " << s.rule_form_failures << " rule-form failures\n";
      if (!s.failures.empty()) out << "    e.g. " << s.failures.front().instance << "\n";
    }
    const auto& c = control.schemata.front();
    out << "  control DIST: " << c.failures.size() << " of " << c.instances_checked
        << " instances not p-valid\n";
    for (const auto* r : {&tertium, &disjunction, &distributivity}) {
      out << "counterexample " << to_string(r->kind) << ": ";
      if (!r->found) {
        out << "none\n";
        continue;
      }
      for (const auto& p : r->properties) out << p << " ";
      out << "replay " << (replay(*r) ? "ok" : "FAILED") << "\n";
    }
  }
  return report.total_failures() == 0 ? kExitOk : kExitFailure;
}

/// Validates a model and reports its properties, plus a partition check of the
/// state classification over seeded random states.
inline int cmd_model_check(const RunConfig& cfg, std::ostream& out) {
  const PropertyModel m = resolve_model(cfg);
  std::mt19937_64 rng(cfg.seed);
  int partition_failures = 0;
  int potential_seen = 0;
  for (int k = 0; k < 20; ++k) {
    const StateRef s = StateRef::normalized(random_unit_vector(m.dim(), rng));
    const StateClassification c = classify(m, s);
    if (c.actual.size() + c.nonactual.size() + c.potential.size() != m.properties().size()) {
      ++partition_failures;
    }
    for (const auto& name : m.names()) {
      const bool in = contains_state(property_extension(m, name), s, m.tolerance());
      const bool out_ = contains_state(ext_complement(property_extension(m, name)), s, m.tolerance());
      if (in != (c.actual.count(name) == 1) || out_ != (c.nonactual.count(name) == 1)) {
        ++partition_failures;
      }
    }
    potential_seen += static_cast<int>(c.potential.size());
  }
  if (cfg.output_format == "json") {
    nlohmann::json props = nlohmann::json::object();
    for (const auto& [name, v] : m.properties()) props[name] = v.dim();
    const nlohmann::json j = {{"dim", m.dim()},
                              {"tolerance", m.tolerance().eps()},
                              {"seed", cfg.seed},
                              {"properties", props},
                              {"classification_failures", partition_failures},
                              {"potential_assignments_seen", potential_seen}};
    out << j.dump(2) << "\n";
  } else {
    out << "model: dimension " << m.dim() << ", tolerance " << m.tolerance().eps() << ", "
        << m.properties().size() << " properties\n";
    for (const auto& [name, v] : m.properties()) out << "  " << name << ": dim " << v.dim() << "\n";
    out << "seed: " << cfg.seed << "\n";
    out << "classification check: " << (partition_failures == 0 ? "ok" : "FAILED") << "\n";
  }
  return partition_failures == 0 ? kExitOk : kExitFailure;
}

/// Runs a command body, mapping library exceptions onto exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const DimensionError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const ConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qpragma::cli
