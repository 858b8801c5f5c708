#pragma once

// Reproducing-kernel diagonals of HL²(ℂ, e^{-φ}).
//
// For degree-≤N polynomials with Gram matrix G_{mn} = ∫ z^m conj(z)^n e^{-φ},
// the truncated kernel is K_N(z,z) = v(z)ᴴ G⁻¹ v(z), v = (1, z, …, z^N).
// With G = LLᴴ this is ‖L⁻¹v‖², a running sum over the rows of L, so every
// leading degree is available from one factorization and K_N is
// nondecreasing in N exactly, not just up to rounding.

#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "fockbound/core.hpp"
#include "fockbound/quadrature.hpp"
#include "fockbound/weights.hpp"

namespace fockbound {

/// Reproducing kernel of the Segal-Bargmann space with density (1/πt)e^{-|z|²/t}.
template <typename Scalar = double>
Complex<Scalar> sb_kernel(Complex<Scalar> z, Complex<Scalar> w, Scalar t) {
  if (!(t > 0)) throw ConfigError("sb_kernel: t must be positive");
  return std::exp(z * std::conj(w) / t);
}

/// Entire test function: polynomial, optionally times exp(rate·z).
struct SampleFunction {
  std::vector<std::complex<double>> coefficients;  // Σ c_k z^k
  std::complex<double> exp_rate{0.0, 0.0};

  template <typename Scalar>
  Complex<Scalar> operator()(Complex<Scalar> z) const {
    Complex<Scalar> acc(0);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it)
      acc = acc * z + Complex<Scalar>(Scalar(it->real()), Scalar(it->imag()));
    if (exp_rate != std::complex<double>{})
      acc *= std::exp(Complex<Scalar>(Scalar(exp_rate.real()), Scalar(exp_rate.imag())) * z);
    return acc;
  }

  int degree() const { return int(coefficients.size()) - 1; }
  bool is_polynomial() const { return exp_rate == std::complex<double>{}; }
};

/// Polynomial with i.i.d. standard complex normal coefficients.
SampleFunction random_polynomial(int degree, std::mt19937_64& rng);
/// Taylor polynomial of exp(rate·z) through the given degree.
SampleFunction truncated_exponential(std::complex<double> rate, int degree);
SampleFunction monomial(int k);

struct KernelOptions {
  double condition_limit = 1e12;
  /// Monomials are taken about this point; defaults to the rule center.
  /// Any center spans the same polynomial space, so K_N does not depend on it.
  std::optional<std::complex<double>> expansion_center;
};

namespace detail {

// Rows √(wᵢ e^{-φ(zᵢ)}) · conj((zᵢ − c)^k), k = 0..N, accumulated as G = UᴴU
// in blocks; powers are formed in log space so large radii cannot overflow.
template <typename Scalar>
ComplexMatrixX<Scalar> assemble_gram(const WeightFunction& w, int N,
                                     const QuadratureRule<Scalar>& rule, Complex<Scalar> center) {
  const Eigen::Index n = N + 1;
  ComplexMatrixX<Scalar> G = ComplexMatrixX<Scalar>::Zero(n, n);
  constexpr Eigen::Index kBlock = 2048;
  ComplexMatrixX<Scalar> U(kBlock, n);
  for (Eigen::Index start = 0; start < rule.size(); start += kBlock) {
    const Eigen::Index rows = std::min(kBlock, rule.size() - start);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Complex<Scalar> z = rule.nodes(start + i);
      const Complex<Scalar> d = z - center;
      const Scalar half_log_weight = (std::log(rule.weights(start + i)) - w.value(z)) / 2;
      const Scalar r = std::abs(d);
      const Complex<Scalar> turn = r > 0 ? std::conj(d) / r : Complex<Scalar>(1);
      const Scalar log_r = r > 0 ? std::log(r) : Scalar(0);
      Complex<Scalar> phase(1);
      for (Eigen::Index k = 0; k < n; ++k) {
        if (r == 0 && k > 0) {
          U(i, k) = Complex<Scalar>(0);
          continue;
        }
        U(i, k) = std::exp(half_log_weight + Scalar(k) * log_r) * phase;
        phase *= turn;
      }
    }
    G.noalias() += U.topRows(rows).adjoint() * U.topRows(rows);
  }
  // (UᴴU)_{mn} = Σ wᵢe^{-φ} zᵢ^m conj(zᵢ)^n already; symmetrize exactly.
  return (G + G.adjoint()) / Scalar(2);
}

}  // namespace detail

/// Hermitian Gram matrix of the monomials (z − c)^m, c = rule center.
/// Throws NotPositiveDefinite when the diagonally scaled matrix does not
/// factor.
template <typename Scalar = double>
ComplexMatrixX<Scalar> gram_matrix(const WeightFunction& w, int N,
                                   const QuadratureRule<Scalar>& rule,
                                   std::optional<std::complex<double>> center = std::nullopt) {
  if (N < 0) throw ConfigError("gram_matrix: degree must be nonnegative");
  const auto c = center.value_or(std::complex<double>(rule.region.center));
  ComplexMatrixX<Scalar> G =
      detail::assemble_gram<Scalar>(w, N, rule, Complex<Scalar>(Scalar(c.real()), Scalar(c.imag())));
  const VectorX<Scalar> s = G.diagonal().real().cwiseSqrt().cwiseInverse();
  const ComplexMatrixX<Scalar> scaled = s.asDiagonal() * G * s.asDiagonal();
  Eigen::LLT<ComplexMatrixX<Scalar>> llt(scaled);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrixX<Scalar>> es(scaled, Eigen::EigenvaluesOnly);
    throw NotPositiveDefinite("gram_matrix: Gram matrix is not positive definite",
                              double(es.eigenvalues()(0)));
  }
  return G;
}

template <typename Scalar = double>
class KernelEstimate {
 public:
  KernelEstimate(const WeightFunction& w, int N, const QuadratureRule<Scalar>& rule,
                 const KernelOptions& options = {});

  int requested_degree() const { return requested_; }
  /// Degree actually used: the largest leading block with acceptable conditioning.
  int degree() const { return degree_; }
  bool degraded() const { return degree_ < requested_; }
  double condition_estimate() const { return condition_; }
  /// Condition number of the scaled leading block of each degree.
  const std::vector<double>& block_conditions() const { return block_conditions_; }
  const ComplexMatrixX<Scalar>& gram() const { return gram_; }
  const Region& region() const { return region_; }
  Complex<Scalar> expansion_center() const { return center_; }

  /// K_n(z,z) for every n = 0..degree().
  VectorX<Scalar> diag_by_degree(Complex<Scalar> z) const;
  /// K_N(z,z) at the used degree.
  Scalar diag(Complex<Scalar> z) const { return diag_by_degree(z)(degree_); }
  /// K_n(z,z) for n <= degree().
  Scalar diag(Complex<Scalar> z, int n) const;
  /// Smallest n >= 5 with |K_n − K_{n−5}| < rel·K_n, or -1 when not reached.
  int converged_degree(Complex<Scalar> z, double rel = 1e-8) const;

 private:
  int requested_ = 0;
  int degree_ = 0;
  double condition_ = 1.0;
  std::vector<double> block_conditions_;
  Region region_;
  Complex<Scalar> center_;
  ComplexMatrixX<Scalar> gram_;
  VectorX<Scalar> scale_;
  ComplexMatrixX<Scalar> lower_;  // Cholesky factor of the scaled used block
};

template <typename Scalar>
KernelEstimate<Scalar>::KernelEstimate(const WeightFunction& w, int N,
                                       const QuadratureRule<Scalar>& rule,
                                       const KernelOptions& options)
    : requested_(N), region_(rule.region) {
  if (N < 0) throw ConfigError("KernelEstimate: degree must be nonnegative");
  const auto c = options.expansion_center.value_or(rule.region.center);
  center_ = Complex<Scalar>(Scalar(c.real()), Scalar(c.imag()));
  gram_ = detail::assemble_gram<Scalar>(w, N, rule, center_);

  const VectorX<Scalar> diagonal = gram_.diagonal().real();
  if (!(diagonal.minCoeff() > 0))
    throw NotPositiveDefinite("KernelEstimate: Gram diagonal is not positive",
                              double(diagonal.minCoeff()));
  scale_ = diagonal.cwiseSqrt().cwiseInverse();
  const ComplexMatrixX<Scalar> scaled = scale_.asDiagonal() * gram_ * scale_.asDiagonal();

  degree_ = -1;
  for (int n = 0; n <= N; ++n) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrixX<Scalar>> es(scaled.topLeftCorner(n + 1, n + 1),
                                                             Eigen::EigenvaluesOnly);
    const Scalar lo = es.eigenvalues()(0);
    const Scalar hi = es.eigenvalues()(n);
    const double cond = lo > 0 ? double(hi / lo) : std::numeric_limits<double>::infinity();
    block_conditions_.push_back(cond);
    if (cond > options.condition_limit) break;
    degree_ = n;
    condition_ = cond;
  }
  if (degree_ < 0)
    throw NotPositiveDefinite("KernelEstimate: no well-conditioned leading block", 0.0);

  Eigen::LLT<ComplexMatrixX<Scalar>> llt(scaled.topLeftCorner(degree_ + 1, degree_ + 1));
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrixX<Scalar>> es(
        scaled.topLeftCorner(degree_ + 1, degree_ + 1), Eigen::EigenvaluesOnly);
    throw NotPositiveDefinite("KernelEstimate: Cholesky factorization failed",
                              double(es.eigenvalues()(0)));
  }
  lower_ = llt.matrixL();
}

template <typename Scalar>
VectorX<Scalar> KernelEstimate<Scalar>::diag_by_degree(Complex<Scalar> z) const {
  const Eigen::Index n = degree_ + 1;
  ComplexVectorX<Scalar> v(n);
  Complex<Scalar> power(1);
  const Complex<Scalar> d = z - center_;
  for (Eigen::Index k = 0; k < n; ++k) {
    v(k) = power * scale_(k);
    power *= d;
  }
  lower_.template triangularView<Eigen::Lower>().solveInPlace(v);
  VectorX<Scalar> cumulative(n);
  Scalar acc = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    acc += std::norm(v(k));
    cumulative(k) = acc;
  }
  return cumulative;
}

template <typename Scalar>
Scalar KernelEstimate<Scalar>::diag(Complex<Scalar> z, int n) const {
  if (n < 0 || n > degree_) throw ConfigError("KernelEstimate::diag: degree out of range");
  return diag_by_degree(z)(n);
}

template <typename Scalar>
int KernelEstimate<Scalar>::converged_degree(Complex<Scalar> z, double rel) const {
  const VectorX<Scalar> k = diag_by_degree(z);
  for (int n = 5; n <= degree_; ++n)
    if (std::abs(double(k(n) - k(n - 5))) < rel * double(k(n))) return n;
  return -1;
}

/// K_N(z,z) from a fresh estimate; prefer building a KernelEstimate once
/// when evaluating many points.
template <typename Scalar = double>
Scalar kernel_diag(const WeightFunction& w, int N, const QuadratureRule<Scalar>& rule,
                   Complex<Scalar> z) {
  return KernelEstimate<Scalar>(w, N, rule).diag(z);
}

/// ‖f‖² in L²(e^{-φ}) over the rule.
template <typename Scalar = double>
Scalar weighted_norm2(const WeightFunction& w, const SampleFunction& f,
                      const QuadratureRule<Scalar>& rule) {
  return integrate(rule, [&](Complex<Scalar> z) { return std::norm(f(z)) * std::exp(-w.value(z)); });
}

/// |f(z)|² / ‖f‖²; bounded by K(z,z) for every f in the space.
template <typename Scalar = double>
Scalar extremal_ratio(const WeightFunction& w, const SampleFunction& f, Complex<Scalar> z,
                      const QuadratureRule<Scalar>& rule) {
  const Scalar norm2 = weighted_norm2(w, f, rule);
  if (!(norm2 > 0)) throw NumericError("extremal_ratio: sample has zero norm");
  return std::norm(f(z)) / norm2;
}

}  // namespace fockbound
