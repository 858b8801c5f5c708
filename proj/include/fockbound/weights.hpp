#pragma once

// Weight exponents φ for densities e^{-φ} on the plane, with closed-form
// Laplacians so the hypothesis 0 <= Δφ <= M can be checked exactly.

#include <span>
#include <utility>
#include <vector>

#include "fockbound/core.hpp"
#include "fockbound/quadrature.hpp"

namespace fockbound {

enum class Family { gaussian, gaussian_harmonic, oscillatory, potential_defined };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// Degree used for the default truncation radius.
inline constexpr int kDefaultMaxDegree = 40;

/// Parameters of every family; only the ones the family uses are meaningful.
///   gaussian           φ = |z|²/t
///   gaussian_harmonic  φ = a|z|² + Re(b z² + c z) + d
///   oscillatory        φ = a|z|² + ε cos x cos y
///   potential_defined  φ = a|z|² + (Γ∗ψ)(z),  ψ(z) = A·exp(1 − 1/(1 − |z|²/ρ²)) on |z| < ρ
struct WeightParams {
  double t = 1.0;
  double a = 1.0;
  std::complex<double> b{0.0, 0.0};
  std::complex<double> c{0.0, 0.0};
  double d = 0.0;
  double eps = 0.0;
  double psi_amplitude = 0.0;
  double psi_radius = 1.0;

  friend bool operator==(const WeightParams&, const WeightParams&) = default;
};

class WeightFunction {
 public:
  static WeightFunction gaussian(double t);
  static WeightFunction gaussian_harmonic(double a, std::complex<double> b = {},
                                          std::complex<double> c = {}, double d = 0.0);
  static WeightFunction oscillatory(double a, double eps);
  static WeightFunction potential_defined(double a, double psi_amplitude, double psi_radius);

  /// Declared bounds [m, M] for Δφ; requires 0 <= m <= M.
  WeightFunction with_bounds(double m, double M) const;
  /// Adds the harmonic polynomial Re Σ h_k z^k (applied before any translation).
  WeightFunction with_harmonic_term(std::vector<std::complex<double>> coefficients) const;

  Family family() const { return family_; }
  const WeightParams& params() const { return params_; }
  std::pair<double, double> laplacian_bounds() const { return bounds_; }
  const std::vector<std::complex<double>>& harmonic_terms() const { return harmonic_; }
  /// Translations, outermost last: evaluation at ω uses z = s₀ + (s₁ + (… + ω)).
  const std::vector<std::complex<double>>& translations() const { return shifts_; }
  /// Radius beyond which e^{-φ}·|polynomial of degree 40|² is negligible.
  double truncation_hint() const { return truncation_hint_; }

  /// Point in the untranslated frame corresponding to ω.
  template <typename Scalar>
  Complex<Scalar> untranslate(Complex<Scalar> w) const {
    for (auto it = shifts_.rbegin(); it != shifts_.rend(); ++it)
      w = Complex<Scalar>(Scalar(it->real()), Scalar(it->imag())) + w;
    return w;
  }

  template <typename Scalar>
  Scalar value(Complex<Scalar> w) const;
  template <typename Scalar>
  Scalar laplacian(Complex<Scalar> w) const;

  friend WeightFunction translate_weight(const WeightFunction& w, std::complex<double> z0);
  friend bool operator==(const WeightFunction&, const WeightFunction&) = default;

 private:
  WeightFunction(Family family, WeightParams params, std::pair<double, double> bounds);
  void refresh_truncation_hint();

  Family family_ = Family::gaussian;
  WeightParams params_;
  std::pair<double, double> bounds_{0.0, 0.0};
  std::vector<std::complex<double>> harmonic_;
  std::vector<std::complex<double>> shifts_;
  double truncation_hint_ = 0.0;
};

namespace detail {

template <typename Scalar>
Scalar bump_profile(Scalar s, Scalar amplitude, Scalar radius) {
  const Scalar u = s / radius;
  if (u >= 1) return Scalar(0);
  return amplitude * std::exp(1 - 1 / (1 - u * u));
}

// Radial logarithmic potential of the bump,
//   (Γ∗ψ)(r) = ∫₀^∞ ψ(s) s log max(r, s) ds.
// With m = min(r, ρ), I(m) = ∫₀^m ψ s ds and J(m) = ∫₀^m ψ s log s ds this is
// log r · I(m) + J(ρ) − J(m). Substituting s = m u³ turns the s log s
// endpoint behavior into u⁵ log u, which Gauss-Legendre handles to rounding.
template <typename Scalar>
struct BumpMoments {
  Scalar mass;  // I(m)
  Scalar log_moment;  // J(m)
};

template <typename Scalar>
BumpMoments<Scalar> bump_moments(Scalar m, Scalar amplitude, Scalar radius) {
  constexpr int kNodes = 64;
  const auto& [gx, gw] = cached_gauss_legendre<Scalar>(kNodes);
  if (m <= 0) return {Scalar(0), Scalar(0)};
  Scalar plain = 0, logged = 0;
  for (int k = 0; k < kNodes; ++k) {
    const Scalar u = (gx(k) + 1) / 2;
    const Scalar u2 = u * u;
    const Scalar weight = gw(k) / 2 * bump_profile(m * u2 * u, amplitude, radius) * u2 * u2 * u;
    plain += weight;
    logged += weight * std::log(u);
  }
  const Scalar mass = 3 * m * m * plain;
  return {mass, std::log(m) * mass + 9 * m * m * logged};
}

template <typename Scalar>
Scalar radial_bump_potential(Scalar r, Scalar amplitude, Scalar radius) {
  if (amplitude == 0) return Scalar(0);
  const Scalar m = std::min(r, radius);
  const auto total = bump_moments(radius, amplitude, radius);
  if (r <= 0) return total.log_moment;
  const auto part = m < radius ? bump_moments(m, amplitude, radius) : total;
  return std::log(r) * part.mass + total.log_moment - part.log_moment;
}

}  // namespace detail

template <typename Scalar>
Scalar WeightFunction::value(Complex<Scalar> w) const {
  const Complex<Scalar> z = untranslate(w);
  const Scalar x = std::real(z), y = std::imag(z);
  const Scalar r2 = std::norm(z);
  Scalar phi = 0;
  switch (family_) {
    case Family::gaussian:
      phi = r2 / Scalar(params_.t);
      break;
    case Family::gaussian_harmonic: {
      const Complex<Scalar> b(params_.b.real(), params_.b.imag());
      const Complex<Scalar> c(params_.c.real(), params_.c.imag());
      phi = Scalar(params_.a) * r2 + std::real(b * z * z + c * z) + Scalar(params_.d);
      break;
    }
    case Family::oscillatory:
      phi = Scalar(params_.a) * r2 + Scalar(params_.eps) * std::cos(x) * std::cos(y);
      break;
    case Family::potential_defined:
      phi = Scalar(params_.a) * r2 +
            detail::radial_bump_potential(std::sqrt(r2), Scalar(params_.psi_amplitude),
                                          Scalar(params_.psi_radius));
      break;
  }
  if (!harmonic_.empty()) {
    Complex<Scalar> acc(0);
    for (auto it = harmonic_.rbegin(); it != harmonic_.rend(); ++it)
      acc = acc * z + Complex<Scalar>(Scalar(it->real()), Scalar(it->imag()));
    phi += std::real(acc);
  }
  return phi;
}

template <typename Scalar>
Scalar WeightFunction::laplacian(Complex<Scalar> w) const {
  const Complex<Scalar> z = untranslate(w);
  switch (family_) {
    case Family::gaussian:
      return 4 / Scalar(params_.t);
    case Family::gaussian_harmonic:
      return 4 * Scalar(params_.a);
    case Family::oscillatory:
      return 4 * Scalar(params_.a) -
             2 * Scalar(params_.eps) * std::cos(std::real(z)) * std::cos(std::imag(z));
    case Family::potential_defined:
      return 4 * Scalar(params_.a) + detail::bump_profile(std::abs(z),
                                                          Scalar(params_.psi_amplitude),
                                                          Scalar(params_.psi_radius));
  }
  return Scalar(0);
}

template <typename Scalar = double>
Scalar eval_weight(const WeightFunction& w, Complex<Scalar> z) {
  return w.value(z);
}

template <typename Scalar = double>
Scalar eval_laplacian(const WeightFunction& w, Complex<Scalar> z) {
  return w.laplacian(z);
}

template <typename Scalar = double>
ScalarField<Scalar> weight_field(const WeightFunction& w) {
  return ScalarField<Scalar>([w](Complex<Scalar> z) { return w.value(z); });
}

template <typename Scalar = double>
ScalarField<Scalar> laplacian_field(const WeightFunction& w) {
  return ScalarField<Scalar>([w](Complex<Scalar> z) { return w.laplacian(z); });
}

/// Five-point stencil Laplacian; O(h²).
template <typename Scalar, typename F>
Scalar fd_laplacian(const F& field, Complex<Scalar> z, Scalar h) {
  if (!(h > 0)) throw ConfigError("fd_laplacian: step must be positive");
  const Complex<Scalar> i(0, 1);
  return (field(z + h) + field(z - h) + field(z + i * h) + field(z - i * h) - 4 * field(z)) /
         (h * h);
}

/// Checks the analytic Δφ against the declared bounds on a grid, and against
/// fd_laplacian (h = 1e-3) for agreement. Never throws on a failed check.
struct LaplacianReport : ValidationReport {
  bool agreement = true;
};

LaplacianReport validate_laplacian_bounds(const WeightFunction& w,
                                          std::span<const std::complex<double>> grid, double tol);

/// ω ↦ φ(z0 + ω). Translating back by −z0 restores the original exactly.
WeightFunction translate_weight(const WeightFunction& w, std::complex<double> z0);

/// Smallest R (by bisection) with e^{-(φ(R) - φ(0))}·R^{2N+1} < 1e-18, using
/// the minimum of φ over the circle |z| = R.
double truncation_hint(const WeightFunction& w, int degree);

/// The Segal-Bargmann density (1/πt)e^{-|z|²/t} written as e^{-φ}.
WeightFunction segal_bargmann_density(double t);

}  // namespace fockbound
