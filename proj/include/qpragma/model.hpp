#pragma once

// Property registry: named properties mapped to closed subspaces of C^d.

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpragma/extension.hpp"
#include "qpragma/formula.hpp"

namespace qpragma {

/// Finite fragment of the property-to-subspace map. Distinct names must map to
/// distinct subspaces; every subspace lives in C^dim.
class PropertyModel {
 public:
  explicit PropertyModel(int dim, Tolerance tol = {}, int max_dim = kMaxAmbientDim)
      : dim_(dim), tol_(tol) {
    if (dim <= 0) throw ModelError("model dimension must be positive");
    if (dim > max_dim) {
      throw ModelError("model dimension " + std::to_string(dim) + " exceeds cap " +
                       std::to_string(max_dim));
    }
  }

  int dim() const noexcept { return dim_; }
  Tolerance tolerance() const noexcept { return tol_; }
  const std::map<std::string, Subspace>& properties() const noexcept { return properties_; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : properties_) out.push_back(name);
    return out;
  }

  bool has(const std::string& name) const { return properties_.count(name) != 0; }

  void add(const std::string& name, const Subspace& value) {
    if (!is_valid_identifier(name)) throw ModelError("invalid property name '" + name + "'");
    if (has(name)) throw ModelError("duplicate property name '" + name + "'");
    if (value.ambient_dim() != dim_) {
      throw ModelError("property '" + name + "' lives in dimension " +
                       std::to_string(value.ambient_dim()) + ", model has " + std::to_string(dim_));
    }
    for (const auto& [other, subspace] : properties_) {
      if (equals(subspace, value, tol_)) {
        throw ModelError("properties '" + other + "' and '" + name + "' denote the same subspace");
      }
    }
    properties_.emplace(name, value);
  }

  const Subspace& property(const std::string& name) const {
    auto it = properties_.find(name);
    if (it == properties_.end()) throw ModelError("unknown property '" + name + "'");
    return it->second;
  }

  /// Name of the registered property equal to v, or empty.
  std::string name_of(const Subspace& v) const {
    for (const auto& [name, subspace] : properties_) {
      if (equals(subspace, v, tol_)) return name;
    }
    return {};
  }

 private:
  int dim_;
  Tolerance tol_;
  std::map<std::string, Subspace> properties_;
};

/// The closed set of states having the property.
inline Extension property_extension(const PropertyModel& m, const std::string& name) {
  return Extension::of(m.property(name));
}

struct StateClassification {
  std::set<std::string> actual;
  std::set<std::string> nonactual;
  std::set<std::string> potential;
};

inline StateClassification classify(const PropertyModel& m, const StateRef& s) {
  if (s.ambient_dim() != m.dim()) throw DimensionError("state ambient dimension mismatch");
  StateClassification out;
  for (const auto& [name, subspace] : m.properties()) {
    const double outside = subspace.residual(s.vector());
    const double inside = (subspace.projector() * s.vector()).norm();
    if (outside <= m.tolerance().eps()) {
      out.actual.insert(name);
    } else if (inside <= m.tolerance().eps()) {
      out.nonactual.insert(name);
    } else {
      out.potential.insert(name);
    }
  }
  return out;
}

/// The atom spanned by the state.
inline Subspace support(const PropertyModel& m, const StateRef& s) {
  if (s.ambient_dim() != m.dim()) throw DimensionError("state ambient dimension mismatch");
  return s.ray(m.tolerance());
}

/// A state along a registered one-dimensional property.
inline StateRef ray_of(const PropertyModel& m, const std::string& name) {
  const Subspace& v = m.property(name);
  if (v.dim() != 1) throw ModelError("property '" + name + "' is not one-dimensional");
  return StateRef::normalized(v.basis().col(0));
}

namespace detail {

inline Vector vector_from_json(const nlohmann::json& j, int d, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw ModelError(where + ": expected " + std::to_string(d) + " complex entries");
  }
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    const auto& c = j[static_cast<std::size_t>(i)];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ModelError(where + ": entries must be [re, im] pairs");
    }
    v[i] = Scalar(c[0].get<double>(), c[1].get<double>());
  }
  if (!all_finite(v)) throw ModelError(where + ": non-finite entry");
  return v;
}

}  // namespace detail

inline PropertyModel model_from_json(const nlohmann::json& j, int max_dim = kMaxAmbientDim) {
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw ModelError("model needs integer 'dim'");
  const int d = j["dim"].get<int>();
  double eps = 1e-9;
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw ModelError("'tolerance' must be a number");
    eps = j["tolerance"].get<double>();
  }
  Tolerance tol;
  try {
    tol = Tolerance(eps);
  } catch (const DomainError& e) {
    throw ModelError(e.what());
  }
  PropertyModel m(d, tol, max_dim);
  if (!j.contains("properties") || !j["properties"].is_object()) {
    throw ModelError("model needs a 'properties' object");
  }
  for (const auto& [name, vectors] : j["properties"].items()) {
    if (!vectors.is_array()) throw ModelError("property '" + name + "' must be a list of vectors");
    std::vector<Vector> cols;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      cols.push_back(detail::vector_from_json(vectors[k], d,
                                              "property '" + name + "' vector " + std::to_string(k)));
    }
    const Subspace v = orthonormalize(d, cols, tol);
    if (v.dim() != static_cast<int>(cols.size())) {
      throw ModelError("property '" + name + "': vectors are linearly dependent");
    }
    m.add(name, v);
  }
  return m;
}

/// Reads a model file. The nlohmann parser detects duplicate keys only as
/// "last wins", so the raw text is scanned for repeated property names first.
inline PropertyModel load_model(const std::string& path, int max_dim = kMaxAmbientDim) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  std::set<std::string> seen;
  bool duplicate = false;
  std::string duplicate_name;
  // Track keys of the "properties" object (depth 2 under the root).
  auto callback = [&](int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    if (event == nlohmann::json::parse_event_t::key && depth == 2 && parsed.is_string()) {
      const auto key = parsed.get<std::string>();
      if (!seen.insert(key).second) {
        duplicate = true;
        duplicate_name = key;
      }
    }
    return true;
  };
  try {
    j = nlohmann::json::parse(buffer.str(), callback);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  if (duplicate) throw ModelError("duplicate property name '" + duplicate_name + "'");
  return model_from_json(j, max_dim);
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

inline nlohmann::json model_to_json(const PropertyModel& m) {
  nlohmann::json props = nlohmann::json::object();
  for (const auto& [name, v] : m.properties()) {
    nlohmann::json cols = nlohmann::json::array();
    for (Eigen::Index c = 0; c < v.basis().cols(); ++c) cols.push_back(vector_to_json(v.basis().col(c)));
    props[name] = cols;
  }
  return {{"dim", m.dim()}, {"tolerance", m.tolerance().eps()}, {"properties", props}};
}

/// Built-in fixtures. "qubit": C^2 with the six Pauli eigenrays Ez+, Ez-,
/// Ex+, Ex-, Ey+, Ey- plus O and I. "qutrit": C^3 with the axes E1, E2, E3,
/// the coordinate planes E12, E13, E23, plus O and I.
inline PropertyModel standard_model(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  const Scalar i(0.0, 1.0);
  if (name == "qubit") {
    PropertyModel m(2);
    auto ray = [](Scalar a, Scalar b) {
      Vector v(2);
      v << a, b;
      return orthonormalize(2, {v});
    };
    m.add("Ez+", ray(1.0, 0.0));
    m.add("Ez-", ray(0.0, 1.0));
    m.add("Ex+", ray(r, r));
    m.add("Ex-", ray(r, -r));
    m.add("Ey+", ray(r, r * i));
    m.add("Ey-", ray(r, -r * i));
    m.add("O", Subspace::zero(2));
    m.add("I", Subspace::full(2));
    return m;
  }
  if (name == "qutrit") {
    PropertyModel m(3);
    const Vector e1 = Vector::Unit(3, 0), e2 = Vector::Unit(3, 1), e3 = Vector::Unit(3, 2);
    m.add("E1", orthonormalize(3, {e1}));
    m.add("E2", orthonormalize(3, {e2}));
    m.add("E3", orthonormalize(3, {e3}));
    m.add("E12", orthonormalize(3, {e1, e2}));
    m.add("E13", orthonormalize(3, {e1, e3}));
    m.add("E23", orthonormalize(3, {e2, e3}));
    m.add("O", Subspace::zero(3));
    m.add("I", Subspace::full(3));
    return m;
  }
  throw ModelError("unknown standard model '" + name + "'");
}

/// Random model in C^d: O, I and `count` random subspaces of random dimension
/// in [1, d-1], named R0, R1, ...
inline PropertyModel random_model(int d, int count, std::uint64_t seed) {
  PropertyModel m(d);
  std::mt19937_64 rng(seed);
  m.add("O", Subspace::zero(d));
  m.add("I", Subspace::full(d));
  for (int k = 0; k < count; ++k) {
    const int dim = d > 1 ? 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d - 1)) : 1;
    m.add("R" + std::to_string(k), random_subspace(d, dim, rng));
  }
  return m;
}

}  // namespace qpragma
