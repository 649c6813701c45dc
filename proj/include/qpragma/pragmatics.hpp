#pragma once

// Set-theoretic pragmatics: the extension map, justification values,
// p-validity, the preorder on formulas, decidability and the CC check.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "qpragma/model.hpp"

namespace qpragma {

enum class Justification { J, U };

inline char to_char(Justification v) { return v == Justification::J ? 'J' : 'U'; }

/// The set of states at which the formula is justified:
/// elementary -> property set, N -> extended complement, K -> intersection,
/// A -> union.
inline Extension pragmatic_extension(const PropertyModel& m, const Formula& f) {
  const Tolerance tol = m.tolerance();
  switch (f.kind()) {
    case Connective::Assert:
      return property_extension(m, f.property());
    case Connective::Not:
      return ext_complement(pragmatic_extension(m, f.operand()), tol);
    case Connective::And:
      return ext_intersect(pragmatic_extension(m, f.lhs()), pragmatic_extension(m, f.rhs()), tol);
    case Connective::Or:
      return ext_union(pragmatic_extension(m, f.lhs()), pragmatic_extension(m, f.rhs()), tol);
  }
  throw std::logic_error("unreachable connective");
}

inline Justification evaluate(const PropertyModel& m, const Formula& f, const StateRef& s) {
  return contains_state(pragmatic_extension(m, f), s, m.tolerance()) ? Justification::J
                                                                     : Justification::U;
}

/// Justified at every state: some component is the whole space.
inline bool p_valid(const PropertyModel& m, const Formula& f) {
  return is_full(pragmatic_extension(m, f));
}

/// Justified at no state.
inline bool p_invalid(const PropertyModel& m, const Formula& f) {
  return pragmatic_extension(m, f).is_empty();
}

/// lhs < rhs: every state justifying lhs justifies rhs.
inline bool preorder(const PropertyModel& m, const Formula& lhs, const Formula& rhs) {
  return ext_includes(pragmatic_extension(m, rhs), pragmatic_extension(m, lhs), m.tolerance());
}

inline bool equivalent(const PropertyModel& m, const Formula& a, const Formula& b) {
  return ext_equals(pragmatic_extension(m, a), pragmatic_extension(m, b), m.tolerance());
}

struct CriterionStep {
  std::string formula;
  std::string criterion;  // "C1", "C2", "C3" or "C4"
  bool closed = false;
  std::string note;
};

struct DecidabilityReport {
  bool decidable = false;
  Extension witness_extension;
  std::vector<CriterionStep> criterion_trace;
};

namespace detail {

inline Extension decide_node(const PropertyModel& m, const Formula& f,
                             std::vector<CriterionStep>& trace) {
  const Tolerance tol = m.tolerance();
  const std::size_t slot = trace.size();
  trace.push_back({print(f), "", false, ""});
  Extension ext = Extension::empty(m.dim());
  std::string criterion;
  std::string note;
  switch (f.kind()) {
    case Connective::Assert:
      ext = property_extension(m, f.property());
      criterion = "C1";
      note = "elementary";
      break;
    case Connective::Not:
      ext = ext_complement(decide_node(m, f.operand(), trace), tol);
      criterion = "C2";
      note = "complement of a closure is closed";
      break;
    case Connective::And: {
      const Extension a = decide_node(m, f.lhs(), trace);
      const Extension b = decide_node(m, f.rhs(), trace);
      ext = ext_intersect(a, b, tol);
      criterion = "C3";
      note = is_closed(a) && is_closed(b) ? "meet of closed sets" : "operand not closed";
      break;
    }
    case Connective::Or: {
      const Extension a = decide_node(m, f.lhs(), trace);
      const Extension b = decide_node(m, f.rhs(), trace);
      ext = ext_union(a, b, tol);
      criterion = "C4";
      if (!is_closed(a) || !is_closed(b)) {
        note = "operand not closed";
      } else if (ext_includes(b, a, tol)) {
        note = "holds: left extension inside right";
      } else if (ext_includes(a, b, tol)) {
        note = "holds: right extension inside left";
      } else {
        note = "fails: extensions incomparable";
      }
      break;
    }
  }
  trace[slot].criterion = criterion;
  trace[slot].closed = is_closed(ext);
  trace[slot].note = note;
  return ext;
}

}  // namespace detail

/// Decidable iff the extension is a closed set. The trace lists every node in
/// pre-order with the criterion that applies to it.
inline DecidabilityReport decide(const PropertyModel& m, const Formula& f) {
  DecidabilityReport report{false, Extension::empty(m.dim()), {}};
  report.witness_extension = detail::decide_node(m, f, report.criterion_trace);
  report.decidable = is_closed(report.witness_extension);
  return report;
}

/// Deduction-lemma check: lhs < rhs iff (lhs Iq rhs) is p-valid. Both sides are
/// computed independently and must agree.
inline bool pdl_check(const PropertyModel& m, const Formula& lhs, const Formula& rhs) {
  if (!in_phi_AD(lhs) || !in_phi_AD(rhs)) {
    throw DomainError("pdl_check requires A-free formulas");
  }
  const bool ordered = preorder(m, lhs, rhs);
  const bool valid = p_valid(m, desugar_iq(lhs, rhs));
  if (ordered != valid) {
    throw ConsistencyError("deduction lemma violated for " + print(lhs) + " and " + print(rhs));
  }
  return ordered;
}

/// A classical truth assignment consistent with the state: 1 on actual
/// properties, 0 on nonactual ones, free on potential ones.
class Assignment {
 public:
  Assignment(const PropertyModel& m, StateRef state, std::map<std::string, bool> values)
      : state_(std::move(state)), values_(std::move(values)) {
    const StateClassification c = classify(m, state_);
    for (const auto& name : m.names()) {
      auto it = values_.find(name);
      if (it == values_.end()) throw DomainError("assignment misses property '" + name + "'");
      if (c.actual.count(name) && !it->second) {
        throw DomainError("assignment gives 0 to actual property '" + name + "'");
      }
      if (c.nonactual.count(name) && it->second) {
        throw DomainError("assignment gives 1 to nonactual property '" + name + "'");
      }
    }
    if (values_.size() != m.properties().size()) throw DomainError("assignment has unknown properties");
  }

  const StateRef& state() const noexcept { return state_; }
  const std::map<std::string, bool>& values() const noexcept { return values_; }
  bool value(const std::string& name) const { return values_.at(name); }

 private:
  StateRef state_;
  std::map<std::string, bool> values_;
};

inline std::vector<Assignment> sample_assignments(const PropertyModel& m, const StateRef& s,
                                                  int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const StateClassification c = classify(m, s);
  std::vector<Assignment> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    std::map<std::string, bool> values;
    for (const auto& name : m.names()) {
      if (c.actual.count(name)) {
        values[name] = true;
      } else if (c.nonactual.count(name)) {
        values[name] = false;
      } else {
        values[name] = (rng() & 1u) != 0;
      }
    }
    out.emplace_back(m, s, std::move(values));
  }
  return out;
}

/// CC: a justified elementary assertion is true under every compatible
/// assignment.
inline bool cc_check(const PropertyModel& m, const StateRef& s,
                     const std::vector<Assignment>& assignments) {
  for (const auto& sigma : assignments) {
    if (!same_state(sigma.state(), s, m.tolerance())) {
      throw DomainError("assignment belongs to a different state");
    }
    for (const auto& name : m.names()) {
      if (evaluate(m, elem(name), s) == Justification::J && !sigma.value(name)) return false;
    }
  }
  return true;
}

}  // namespace qpragma
