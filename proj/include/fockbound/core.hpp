#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fockbound {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVectorX = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrixX = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: parameters, config keys, knob ranges.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy value.
class NumericError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Gram matrix factorization failed.
class NotPositiveDefinite : public NumericError {
 public:
  NotPositiveDefinite(const std::string& what, double smallest_eigenvalue)
      : NumericError(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// A hypothesis check failed (e.g. Δφ outside the declared bounds).
class ValidationFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A case the constructive routines deliberately do not handle.
class UnsupportedCase : public Error {
 public:
  using Error::Error;
};

/// Real field on the plane, optionally with declared compact support.
/// Outside a declared support radius the evaluator is never called and the
/// field is exactly zero.
template <typename Scalar>
class ScalarField {
 public:
  using Evaluator = std::function<Scalar(Complex<Scalar>)>;

  ScalarField() = default;
  explicit ScalarField(Evaluator f, std::optional<Scalar> support_radius = std::nullopt)
      : f_(std::move(f)), support_radius_(support_radius) {}

  Scalar operator()(Complex<Scalar> z) const {
    if (support_radius_ && std::abs(z) > *support_radius_) return Scalar(0);
    return f_(z);
  }

  const std::optional<Scalar>& support_radius() const { return support_radius_; }
  explicit operator bool() const { return static_cast<bool>(f_); }

 private:
  Evaluator f_;
  std::optional<Scalar> support_radius_;
};

/// Pairwise (cascade) summation; result independent of thread scheduling
/// and accurate to O(log n) roundings.
template <typename T, typename Getter>
T pairwise_sum(std::size_t begin, std::size_t end, const Getter& get) {
  constexpr std::size_t kBlock = 32;
  if (end - begin <= kBlock) {
    T acc = T(0);
    for (std::size_t i = begin; i < end; ++i) acc += get(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return pairwise_sum<T>(begin, mid, get) + pairwise_sum<T>(mid, end, get);
}

/// Summary of a pointwise check over a set of points.
struct ValidationReport {
  bool pass = true;
  double min_value = 0.0;
  double max_value = 0.0;
  double max_discrepancy = 0.0;
  std::optional<std::complex<double>> first_violation;
  std::vector<std::string> notes;
};

}  // namespace fockbound
