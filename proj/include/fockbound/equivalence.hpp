#pragma once

// Holomorphic equivalence of densities α = e^{-φ_a}, β = e^{-φ_b}:
// β = α/|φ_eq|² for a nowhere-zero entire φ_eq. Constructed here exactly when
// φ_b − φ_a is a harmonic polynomial u, with φ_eq = exp(p/2), Re p = u.

#include <optional>
#include <span>
#include <vector>

#include "fockbound/kernel.hpp"
#include "fockbound/quadrature.hpp"
#include "fockbound/weights.hpp"

namespace fockbound {

/// Real polynomial Σ c(j,k) x^j y^k.
class RealPolynomial2 {
 public:
  RealPolynomial2() : coefficients_(Eigen::MatrixXd::Zero(1, 1)) {}
  explicit RealPolynomial2(Eigen::MatrixXd coefficients);

  /// Re(h·z^k) as a polynomial in x and y.
  static RealPolynomial2 real_part_of_monomial(std::complex<double> h, int k);

  const Eigen::MatrixXd& coefficients() const { return coefficients_; }
  double coefficient(int j, int k) const;
  int degree() const;

  double operator()(double x, double y) const;
  double operator()(std::complex<double> z) const { return (*this)(z.real(), z.imag()); }

  RealPolynomial2 laplacian() const;
  /// (x, y) ↦ p(x + s.re, y + s.im)
  RealPolynomial2 shifted(std::complex<double> s) const;
  bool is_zero(double tol = 0.0) const;

  friend RealPolynomial2 operator+(const RealPolynomial2& a, const RealPolynomial2& b);
  friend RealPolynomial2 operator-(const RealPolynomial2& a, const RealPolynomial2& b);
  friend RealPolynomial2 operator*(double s, const RealPolynomial2& p);

 private:
  Eigen::MatrixXd coefficients_;
};

/// Σ c_k z^k, ascending.
struct ComplexPolynomial {
  std::vector<std::complex<double>> coefficients;

  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> acc(0.0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
};

/// p(z) = 2·u(z/2, z/(2i)) − u(0,0), so that Re p = u and p(0) is real.
/// Throws UnsupportedCase naming the first nonzero Laplacian coefficient when
/// u is not harmonic.
ComplexPolynomial harmonic_conjugate_poly(const RealPolynomial2& u);

/// Strictly positive density α = e^{-φ}.
struct WeightDensity {
  WeightFunction phi;

  double operator()(std::complex<double> z) const { return std::exp(-phi.value(z)); }
};

/// Polynomial part of φ (exact) and whether a non-polynomial part remains.
struct WeightDecomposition {
  RealPolynomial2 polynomial;
  bool has_residual = false;
};

WeightDecomposition decompose(const WeightFunction& w);

/// φ_b − φ_a as a polynomial, when the non-polynomial parts coincide.
std::optional<RealPolynomial2> polynomial_difference(const WeightFunction& a,
                                                     const WeightFunction& b);

struct CriterionReport {
  bool equal = true;
  double max_gap = 0.0;
  std::optional<std::complex<double>> first_mismatch;
};

/// Δ log α = Δ log β on the grid, i.e. |Δφ_a − Δφ_b| <= tol pointwise.
CriterionReport log_laplacian_equal(const WeightDensity& a, const WeightDensity& b,
                                    std::span<const std::complex<double>> grid, double tol);

class EquivalenceMap {
 public:
  EquivalenceMap(ComplexPolynomial exponent, WeightDensity source, WeightDensity target)
      : exponent_(std::move(exponent)), source_(std::move(source)), target_(std::move(target)) {}

  /// φ_eq(z) = exp(p(z)/2)
  std::complex<double> operator()(std::complex<double> z) const { return std::exp(exponent_(z) / 2.0); }
  const ComplexPolynomial& exponent() const { return exponent_; }
  const WeightDensity& source() const { return source_; }
  const WeightDensity& target() const { return target_; }

  /// max over the grid of | |φ_eq|²β/α − 1 |
  double residual(std::span<const std::complex<double>> grid) const;

 private:
  ComplexPolynomial exponent_;
  WeightDensity source_;
  WeightDensity target_;
};

/// φ_eq with |φ_eq|²·β = α. Throws UnsupportedCase when φ_b − φ_a is not a
/// polynomial, or not harmonic.
EquivalenceMap build_equivalence_map(const WeightDensity& a, const WeightDensity& b);

/// Density (1/πt)e^{-|z|²/t} with t = 4/c for a weight with Δφ ≡ c > 0, and
/// the map onto it. Throws UnsupportedCase if Δφ is not constant.
EquivalenceMap map_to_segal_bargmann(const WeightDensity& a);

struct UnitaryReport {
  bool pass = true;
  std::vector<double> norm_ratios;  // ‖φ_eq f‖²_β / ‖f‖²_α
  double max_relative_error = 0.0;
};

UnitaryReport verify_unitary(const EquivalenceMap& m, std::span<const SampleFunction> samples,
                             const QuadratureRule<double>& rule, double tol);

struct InvariancePoint {
  std::complex<double> z;
  double source_value = 0.0;  // α(z) K_α(z,z)
  double target_value = 0.0;  // β(z) K_β(z,z)
  double relative_gap = 0.0;
  int source_degree = 0;
  int target_degree = 0;
  int source_converged = -1;  // converged_degree, -1 when not reached
  int target_converged = -1;
};

struct InvarianceReport {
  bool pass = true;
  double max_relative_gap = 0.0;
  std::vector<InvariancePoint> points;
};

/// α K_α(z,z) = β K_β(z,z) with both kernels truncated at N on the same rule.
/// Unless φ_eq is constant the finite-N values only agree once both have
/// converged in N; the report carries the degrees and convergence points.
InvarianceReport verify_kernel_invariance(const WeightDensity& a, const WeightDensity& b,
                                          std::span<const std::complex<double>> z_list, int N,
                                          const QuadratureRule<double>& rule, double tol);

}  // namespace fockbound
