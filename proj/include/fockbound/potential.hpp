#pragma once

// Logarithmic potential objects used to bound the weight locally:
// Γ, the cutoff g, ψ = g·Δφ, Φ = Γ∗ψ and the constant B.

#include <span>

#include "fockbound/core.hpp"
#include "fockbound/quadrature.hpp"
#include "fockbound/weights.hpp"

namespace fockbound {

/// Fundamental solution of the Laplacian in the plane, (1/2π) log|z|.
template <typename Scalar = double>
Scalar gamma(Complex<Scalar> z) {
  if (z == Complex<Scalar>(0)) throw DomainError("gamma: log singularity at z = 0");
  return std::log(std::abs(z)) / (2 * pi_v<Scalar>);
}

/// Smooth radial cutoff: 1 on the closed unit disk, 0 outside D(0,2).
template <typename Scalar = double>
Scalar cutoff_g(Complex<Scalar> z) {
  const Scalar r = std::abs(z);
  if (r <= 1) return Scalar(1);
  if (r >= 2) return Scalar(0);
  const auto q = [](Scalar t) { return t > 0 ? std::exp(-1 / t) : Scalar(0); };
  const Scalar inside = q(2 - r);
  return inside / (inside + q(r - 1));
}

/// Φ(z) = ∫ Γ(ζ) ψ(z − ζ) dζ.
///
/// Near the support (|z| <= ρ + 1, ρ the support radius of ψ) the rule is a
/// graded polar rule centered on the singularity ζ = 0 over the window
/// D(0, ρ + √(1+|z|²)) ⊇ D(0, ρ + |z|); the window varies smoothly with z so
/// finite differences of Φ see a smooth quadrature error. Farther out Γ is
/// smooth on the support and the equivalent form ∫ Γ(z − η) ψ(η) dη is
/// integrated over D(0, ρ) with a fixed rule.
template <typename Scalar = double>
Scalar convolve_fundamental(const ScalarField<Scalar>& psi, Complex<Scalar> z, int resolution) {
  if (!psi.support_radius())
    throw ConfigError("convolve_fundamental: psi must declare a support radius");
  const Scalar support = *psi.support_radius();
  const auto log_kernel = [](Complex<Scalar> p) {
    return std::log(std::abs(p)) / (2 * pi_v<Scalar>);
  };
  if (std::abs(z) > support + 1) {
    const auto rule = disk_rule<Scalar>({}, support, resolution, 2 * resolution);
    return integrate(rule, [&](Complex<Scalar> eta) { return log_kernel(z - eta) * psi(eta); });
  }
  const Scalar window = support + std::sqrt(1 + std::norm(z));
  const auto rule = graded_disk_rule<Scalar>({}, window, resolution, 2 * resolution);
  return integrate(rule, [&](Complex<Scalar> zeta) { return log_kernel(zeta) * psi(z - zeta); });
}

/// B = (1/2π) sup_{ω ∈ D(0,1)} ∫_{D(ω,2)∖D(0,1)} log|ζ| dζ, approximated on a
/// polar ω-grid (radii k/(n−1), n angles per ring; the outer ring is the unit
/// circle). value = grid_sup + margin, where the margin adds the gap to the
/// every-other-point subgrid and the quadrature estimate at the maximizer.
struct BConstant {
  double value = 0.0;
  double grid_sup = 0.0;
  double margin = 0.0;
  double quadrature_error = 0.0;
  std::complex<double> argmax{0.0, 0.0};
  double bracket_lo = 0.0;
  double bracket_hi = 2 * std::log(3.0);
};

using BIntegrand = std::function<double(std::complex<double>)>;

BConstant compute_B(int resolution, int omega_grid_size, const BIntegrand& integrand = {});

/// The integral ∫_{D(ω,2)∖D(0,1)} integrand, by a ray-clipped polar rule about ω.
double masked_log_integral(std::complex<double> omega, int resolution,
                           const BIntegrand& integrand = {});

struct PotentialField {
  ScalarField<double> psi;
  WeightFunction weight = WeightFunction::gaussian(1.0);
  double M = 0.0;
  double B_used = 0.0;
  int resolution = 256;

  double phi(std::complex<double> z) const {
    return convolve_fundamental(psi, z, resolution);
  }
};

/// ψ = g·Δφ. The hypothesis 0 <= Δφ <= M is checked on `validation_grid`
/// (default: 0.05-spaced grid over D(0,2)); a violation throws
/// ValidationFailure naming the point.
PotentialField make_psi(const WeightFunction& w, double M,
                        std::span<const std::complex<double>> validation_grid = {},
                        double tol = 1e-9);

/// A field with ψ ≡ 0 (Φ ≡ 0), used as a control.
PotentialField zero_potential(double M, int resolution = 256);

struct PotentialReport {
  bool pass = true;
  bool upper_ok = true;    // Φ(ω) <= B·M + tol on the grid
  bool lower_ok = true;    // Φ(0) >= −M/4 − tol
  bool poisson_ok = true;  // |ΔΦ − ψ| <= poisson_tol on the grid
  double max_phi = 0.0;
  double phi_at_zero = 0.0;
  double upper_limit = 0.0;
  double lower_limit = 0.0;
  double max_poisson_residual = 0.0;
  double poisson_tol = 0.0;
  std::vector<std::string> notes;
};

struct PoissonCheck {
  double tol = -1.0;           // <= 0 means 5e-3·(1 + M)
  double fd_step = 1e-2;
  std::size_t max_points = 50;  // leading grid points checked
};

/// Checks Φ <= B·M + tol on the grid, Φ(0) >= −M/4 − tol, and ΔΦ = ψ by
/// finite differences on grid points at least fd_step inside the unit disk.
PotentialReport verify_potential_bounds(const PotentialField& pf,
                                        std::span<const std::complex<double>> grid_in_unit_disk,
                                        double tol, const PoissonCheck& poisson = {});

}  // namespace fockbound
