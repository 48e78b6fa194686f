#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace centrelat {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Default tolerances. Exact-class checks are algebraically exact on diagonal
/// data and only absorb rounding; oracle-class checks compare against an
/// independent (sampled or iterative) computation.
struct Tolerances {
  double exact = 1e-12;
  double oracle = 1e-9;
  double witness = 1e-10;
};

inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kOracleTolerance = 1e-9;
inline constexpr double kWitnessTolerance = 1e-10;

// Error hierarchy. Every error is a std::runtime_error, so callers that do
// not care about the category can catch that.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data: mismatched dimensions, non-finite entries, bad partitions.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A sequence-mode certificate failed validation.
class CertificateError : public Error {
 public:
  CertificateError(const std::string& what, std::size_t witness_index)
      : Error(what + " (witness index " + std::to_string(witness_index) + ")"),
        witness_index_(witness_index) {}
  explicit CertificateError(const std::string& what) : Error(what) {}

  std::size_t witness_index() const noexcept { return witness_index_; }

 private:
  std::size_t witness_index_ = 0;
};

/// A function is not constant on an atom of the sigma-algebra.
class MeasurabilityError : public Error {
 public:
  using Error::Error;
};

/// A map or measure value left the positive cone.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// |a - b| <= tol * max(1, |a|, |b|).
inline bool close(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

inline bool close(Complex a, Complex b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

/// Scaled deviation: |a - b| / max(1, |a|, |b|).
inline double deviation(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double deviation(Complex a, Complex b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Largest scaled coordinatewise deviation between two vectors of equal size.
template <class A, class B>
double max_deviation(const A& a, const B& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, deviation(a[i], b[i]));
  return worst;
}

std::string format_complex(Complex z);

}  // namespace centrelat
