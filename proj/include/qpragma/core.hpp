#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpragma {

using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Largest ambient dimension accepted unless a caller raises the cap.
inline constexpr int kMaxAmbientDim = 16;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ambient-dimension mismatch or vector-length mismatch.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input, invalid tolerance, or otherwise out-of-domain value.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

/// Raised when two routes that must agree (e.g. PDL) disagree.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Single numerical knob used for every rank decision and inclusion test.
class Tolerance {
 public:
  constexpr Tolerance() = default;
  explicit Tolerance(double eps) : eps_(eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw DomainError("tolerance must lie in (0, 1), got " + std::to_string(eps));
    }
  }

  constexpr double eps() const noexcept { return eps_; }

 private:
  double eps_ = 1e-9;
};

inline bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

}  // namespace qpragma
