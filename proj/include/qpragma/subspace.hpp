#pragma once

// Closed subspaces of C^d and the lattice operations on them.
//
// A Subspace is identified by its orthogonal projector; the orthonormal basis
// is kept alongside for joins and state construction. Values are immutable.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qpragma/core.hpp"

namespace qpragma {

class Subspace;
Subspace orthonormalize(int d, std::span<const Vector> vectors, Tolerance tol = {});

class Subspace {
 public:
  /// The zero subspace O of C^d.
  static Subspace zero(int d) { return Subspace(d, Matrix(d, 0)); }

  /// The whole space I = C^d.
  static Subspace full(int d) { return Subspace(d, Matrix::Identity(d, d)); }

  int ambient_dim() const noexcept { return d_; }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  bool is_zero() const noexcept { return dim() == 0; }
  bool is_full() const noexcept { return dim() == d_; }

  const Matrix& basis() const noexcept { return basis_; }
  const Matrix& projector() const noexcept { return projector_; }

  /// Residual norm of v after projection onto this subspace.
  double residual(const Vector& v) const { return (v - projector_ * v).norm(); }

 private:
  friend Subspace orthonormalize(int, std::span<const Vector>, Tolerance);
  friend Subspace complement(const Subspace&);

  Subspace(int d, Matrix basis)
      : d_(d), basis_(std::move(basis)), projector_(basis_ * basis_.adjoint()) {
    if (basis_.cols() == 0) projector_ = Matrix::Zero(d, d);
  }

  int d_;
  Matrix basis_;
  Matrix projector_;
};

namespace detail {

inline void check_ambient(int d) {
  if (d <= 0) throw DimensionError("ambient dimension must be positive");
}

inline void check_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DimensionError("ambient dimension mismatch: " + std::to_string(a.ambient_dim()) +
                         " vs " + std::to_string(b.ambient_dim()));
  }
}

// Subtract the components along the accepted columns; twice, for stability.
inline void project_out(Vector& r, const std::vector<Vector>& accepted) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : accepted) r -= q * q.dot(r);
  }
}

inline Matrix to_matrix(int d, const std::vector<Vector>& columns) {
  Matrix m(d, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = columns[j];
  return m;
}

inline std::vector<Vector> columns_of(const Matrix& m) {
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.emplace_back(m.col(j));
  return out;
}

}  // namespace detail

/// Span of the given vectors, by modified Gram-Schmidt with one
/// reorthogonalization pass. A vector whose residual after projection onto the
/// already accepted columns has norm <= eps is dropped.
inline Subspace orthonormalize(int d, std::span<const Vector> vectors, Tolerance tol) {
  detail::check_ambient(d);
  std::vector<Vector> accepted;
  for (const auto& v : vectors) {
    if (v.size() != d) {
      throw DimensionError("vector of length " + std::to_string(v.size()) +
                           " in ambient dimension " + std::to_string(d));
    }
    if (!all_finite(v)) throw DomainError("non-finite vector entry");
    Vector r = v;
    detail::project_out(r, accepted);
    const double n = r.norm();
    if (n > tol.eps()) accepted.emplace_back(r / n);
    if (static_cast<int>(accepted.size()) == d) break;
  }
  return Subspace(d, detail::to_matrix(d, accepted));
}

inline Subspace orthonormalize(int d, std::initializer_list<Vector> vectors, Tolerance tol = {}) {
  return orthonormalize(d, std::span<const Vector>(vectors.begin(), vectors.size()), tol);
}

/// Span of the columns of m.
inline Subspace span_of_columns(const Matrix& m, Tolerance tol = {}) {
  const auto cols = detail::columns_of(m);
  return orthonormalize(static_cast<int>(m.rows()), cols, tol);
}

/// Orthocomplement. The basis is completed greedily from the standard basis,
/// always taking the candidate with the largest residual, so exactly d - k
/// columns are produced.
inline Subspace complement(const Subspace& v) {
  const int d = v.ambient_dim();
  std::vector<Vector> accepted = detail::columns_of(v.basis());
  std::vector<Vector> added;
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  for (int step = v.dim(); step < d; ++step) {
    int best = -1;
    double best_norm = -1.0;
    Vector best_r;
    for (int i = 0; i < d; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      Vector r = Vector::Unit(d, i);
      detail::project_out(r, accepted);
      const double n = r.norm();
      if (n > best_norm) {
        best = i;
        best_norm = n;
        best_r = std::move(r);
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    best_r /= best_norm;
    accepted.push_back(best_r);
    added.push_back(std::move(best_r));
  }
  return Subspace(d, detail::to_matrix(d, added));
}

/// Closed span of V and W.
inline Subspace join(const Subspace& v, const Subspace& w, Tolerance tol = {}) {
  detail::check_same_ambient(v, w);
  std::vector<Vector> cols = detail::columns_of(v.basis());
  for (auto& c : detail::columns_of(w.basis())) cols.push_back(std::move(c));
  return orthonormalize(v.ambient_dim(), cols, tol);
}

/// Intersection, computed as (V^perp join W^perp)^perp.
inline Subspace meet(const Subspace& v, const Subspace& w, Tolerance tol = {}) {
  detail::check_same_ambient(v, w);
  return complement(join(complement(v), complement(w), tol));
}

/// Largest entry of |(I - P_V) P_W|; zero iff W is inside V.
inline double inclusion_residual(const Subspace& v, const Subspace& w) {
  detail::check_same_ambient(v, w);
  const Matrix r = w.projector() - v.projector() * w.projector();
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

/// W is a subspace of V.
inline bool includes(const Subspace& v, const Subspace& w, Tolerance tol = {}) {
  return inclusion_residual(v, w) <= tol.eps();
}

inline double projector_distance(const Subspace& v, const Subspace& w) {
  detail::check_same_ambient(v, w);
  return (v.projector() - w.projector()).cwiseAbs().maxCoeff();
}

inline bool equals(const Subspace& v, const Subspace& w, Tolerance tol = {}) {
  return projector_distance(v, w) <= tol.eps();
}

/// Canonical order: by dimension, then projector entries row-major
/// (real part before imaginary), entries closer than eps treated as equal.
inline int canonical_compare(const Subspace& a, const Subspace& b, Tolerance tol = {}) {
  detail::check_same_ambient(a, b);
  if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
  const int d = a.ambient_dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Scalar x = a.projector()(i, j);
      const Scalar y = b.projector()(i, j);
      if (std::abs(x.real() - y.real()) > tol.eps()) return x.real() < y.real() ? -1 : 1;
      if (std::abs(x.imag() - y.imag()) > tol.eps()) return x.imag() < y.imag() ? -1 : 1;
    }
  }
  return 0;
}

inline Vector gaussian_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Scalar(re, im);
  }
  return v;
}

/// Random unit vector, uniform on the sphere of C^d.
inline Vector random_unit_vector(int d, std::mt19937_64& rng) {
  Vector v = gaussian_vector(d, rng);
  return v / v.norm();
}

inline Subspace random_subspace(int d, int k, std::mt19937_64& rng, Tolerance tol = {}) {
  detail::check_ambient(d);
  if (k < 0 || k > d) {
    throw DimensionError("random_subspace: k=" + std::to_string(k) + " outside [0, " +
                         std::to_string(d) + "]");
  }
  // Gaussian vectors are independent with probability one; retry covers
  // the measure-zero failure.
  for (;;) {
    std::vector<Vector> cols;
    for (int i = 0; i < k; ++i) cols.push_back(gaussian_vector(d, rng));
    Subspace s = orthonormalize(d, cols, tol);
    if (s.dim() == k) return s;
  }
}

/// Haar-like random k-dimensional subspace of C^d, deterministic per seed.
inline Subspace random_subspace(int d, int k, std::uint64_t seed, Tolerance tol = {}) {
  std::mt19937_64 rng(seed);
  return random_subspace(d, k, rng, tol);
}

/// Random subspace of W (a random span of combinations of W's basis).
inline Subspace random_subspace_of(const Subspace& w, int k, std::mt19937_64& rng,
                                   Tolerance tol = {}) {
  if (k < 0 || k > w.dim()) throw DimensionError("random_subspace_of: k out of range");
  for (;;) {
    std::vector<Vector> cols;
    for (int i = 0; i < k; ++i) cols.push_back(w.basis() * gaussian_vector(w.dim(), rng));
    Subspace s = orthonormalize(w.ambient_dim(), cols, tol);
    if (s.dim() == k) return s;
  }
}

}  // namespace qpragma
