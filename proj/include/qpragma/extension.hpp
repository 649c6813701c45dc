#pragma once

// Pragmatic extensions: finite unions of closed subsets of the state set.
//
// A state is a unit ray of C^d, so a closed subset of states is a Subspace and
// the zero subspace contains no state. An Extension is kept in antichain normal
// form: no component is included in another, O never appears, and components
// are sorted canonically.

#include <algorithm>
#include <string>
#include <vector>

#include "qpragma/subspace.hpp"

namespace qpragma {

/// Pure state, represented by a unit vector (meaningful up to phase).
class StateRef {
 public:
  /// Accepts v only if it is a unit vector within tol.
  explicit StateRef(Vector v, Tolerance tol = {}) : vector_(std::move(v)) {
    if (vector_.size() == 0) throw DimensionError("state vector is empty");
    if (!all_finite(vector_)) throw DomainError("non-finite state vector entry");
    if (std::abs(vector_.norm() - 1.0) > tol.eps()) {
      throw DomainError("state vector is not normalized");
    }
  }

  /// Normalizes a nonzero vector.
  static StateRef normalized(const Vector& v) {
    if (!all_finite(v)) throw DomainError("non-finite state vector entry");
    const double n = v.norm();
    if (n == 0.0) throw DomainError("zero vector is not a state");
    return StateRef(v / n, Tolerance(1e-6));
  }

  int ambient_dim() const noexcept { return static_cast<int>(vector_.size()); }
  const Vector& vector() const noexcept { return vector_; }

  /// The one-dimensional subspace spanned by the state.
  Subspace ray(Tolerance tol = {}) const {
    return orthonormalize(ambient_dim(), {vector_}, tol);
  }

 private:
  Vector vector_;
};

inline bool same_state(const StateRef& a, const StateRef& b, Tolerance tol = {}) {
  if (a.ambient_dim() != b.ambient_dim()) return false;
  return std::abs(std::abs(a.vector().dot(b.vector())) - 1.0) <= tol.eps();
}

class Extension;
Extension normalize(int d, std::vector<Subspace> components, Tolerance tol = {});

class Extension {
 public:
  static Extension empty(int d) { return Extension(d, {}); }

  /// The closed set {V}, or the empty set when V = O.
  static Extension of(const Subspace& v) {
    if (v.is_zero()) return empty(v.ambient_dim());
    return Extension(v.ambient_dim(), {v});
  }

  int ambient_dim() const noexcept { return d_; }
  const std::vector<Subspace>& components() const noexcept { return components_; }
  bool is_empty() const noexcept { return components_.empty(); }
  std::size_t size() const noexcept { return components_.size(); }

  std::vector<int> component_dims() const {
    std::vector<int> out;
    for (const auto& c : components_) out.push_back(c.dim());
    return out;
  }

 private:
  friend Extension normalize(int, std::vector<Subspace>, Tolerance);
  Extension(int d, std::vector<Subspace> components) : d_(d), components_(std::move(components)) {}

  int d_;
  std::vector<Subspace> components_;
};

/// Antichain normal form: drops O, duplicates, and every component included
/// in another; sorts by dimension then projector entries.
inline Extension normalize(int d, std::vector<Subspace> components, Tolerance tol) {
  std::vector<Subspace> kept;
  for (auto& c : components) {
    if (c.ambient_dim() != d) throw DimensionError("extension component has wrong ambient dimension");
    if (c.is_zero()) continue;
    bool absorbed = false;
    for (const auto& k : kept) {
      if (includes(k, c, tol)) {
        absorbed = true;
        break;
      }
    }
    if (absorbed) continue;
    std::erase_if(kept, [&](const Subspace& k) { return includes(c, k, tol); });
    kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end(), [&](const Subspace& a, const Subspace& b) {
    return canonical_compare(a, b, tol) < 0;
  });
  return Extension(d, std::move(kept));
}

namespace detail {
inline void check_same_ambient(const Extension& a, const Extension& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionError("extension ambient dimension mismatch");
}
}  // namespace detail

inline Extension ext_union(const Extension& a, const Extension& b, Tolerance tol = {}) {
  detail::check_same_ambient(a, b);
  std::vector<Subspace> all = a.components();
  all.insert(all.end(), b.components().begin(), b.components().end());
  return normalize(a.ambient_dim(), std::move(all), tol);
}

/// Set intersection distributes over the unions, and each pairwise
/// intersection of closed sets is the subspace meet.
inline Extension ext_intersect(const Extension& a, const Extension& b, Tolerance tol = {}) {
  detail::check_same_ambient(a, b);
  std::vector<Subspace> all;
  for (const auto& v : a.components()) {
    for (const auto& w : b.components()) all.push_back(meet(v, w, tol));
  }
  return normalize(a.ambient_dim(), std::move(all), tol);
}

/// Least closed subset containing T: the join of its components.
inline Subspace closure(const Extension& t, Tolerance tol = {}) {
  Subspace acc = Subspace::zero(t.ambient_dim());
  for (const auto& c : t.components()) acc = join(acc, c, tol);
  return acc;
}

/// Extended orthocomplement: the complement of the closure.
inline Extension ext_complement(const Extension& t, Tolerance tol = {}) {
  return Extension::of(complement(closure(t, tol)));
}

inline bool contains_state(const Extension& t, const StateRef& s, Tolerance tol = {}) {
  if (s.ambient_dim() != t.ambient_dim()) throw DimensionError("state ambient dimension mismatch");
  return std::any_of(t.components().begin(), t.components().end(),
                     [&](const Subspace& v) { return v.residual(s.vector()) <= tol.eps(); });
}

/// T2 is a subset of T1. A subspace inside a finite union of subspaces lies in
/// one of them, so the test is componentwise.
inline bool ext_includes(const Extension& t1, const Extension& t2, Tolerance tol = {}) {
  detail::check_same_ambient(t1, t2);
  return std::all_of(t2.components().begin(), t2.components().end(), [&](const Subspace& w) {
    return std::any_of(t1.components().begin(), t1.components().end(),
                       [&](const Subspace& v) { return includes(v, w, tol); });
  });
}

inline bool ext_equals(const Extension& a, const Extension& b, Tolerance tol = {}) {
  return ext_includes(a, b, tol) && ext_includes(b, a, tol);
}

/// Closed iff empty or a single component after normalization.
inline bool is_closed(const Extension& t) { return t.size() <= 1; }

inline bool is_full(const Extension& t) {
  return std::any_of(t.components().begin(), t.components().end(),
                     [](const Subspace& v) { return v.is_full(); });
}

}  // namespace qpragma
