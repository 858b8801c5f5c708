#include "fockbound/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fockbound {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool finite(double v) { return std::isfinite(v); }
bool finite(std::complex<double> v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::gaussian:
      return "gaussian";
    case Family::gaussian_harmonic:
      return "gaussian_harmonic";
    case Family::oscillatory:
      return "oscillatory";
    case Family::potential_defined:
      return "potential_defined";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::gaussian, Family::gaussian_harmonic, Family::oscillatory,
                   Family::potential_defined})
    if (name == family_name(f)) return f;
  throw ConfigError("unknown weight family '" + name + "'");
}

WeightFunction::WeightFunction(Family family, WeightParams params, std::pair<double, double> bounds)
    : family_(family), params_(params), bounds_(bounds) {
  refresh_truncation_hint();
}

void WeightFunction::refresh_truncation_hint() {
  try {
    truncation_hint_ = fockbound::truncation_hint(*this, kDefaultMaxDegree);
  } catch (const NumericError&) {
    // e^{-φ} is not integrable (e.g. a cubic harmonic addend)
    truncation_hint_ = std::numeric_limits<double>::infinity();
  }
}

WeightFunction WeightFunction::gaussian(double t) {
  require(finite(t) && t > 0, "gaussian: t must be positive");
  WeightParams p;
  p.t = t;
  return {Family::gaussian, p, {4 / t, 4 / t}};
}

WeightFunction WeightFunction::gaussian_harmonic(double a, std::complex<double> b,
                                                 std::complex<double> c, double d) {
  require(finite(a) && a > 0, "gaussian_harmonic: a must be positive");
  require(finite(b) && finite(c) && finite(d), "gaussian_harmonic: non-finite parameter");
  // e^{-φ} must stay integrable: a|z|² dominates Re(b z²) only when |b| < a.
  require(std::abs(b) < a, "gaussian_harmonic: need |b| < a for integrability");
  WeightParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  return {Family::gaussian_harmonic, p, {4 * a, 4 * a}};
}

WeightFunction WeightFunction::oscillatory(double a, double eps) {
  require(finite(a) && a > 0, "oscillatory: a must be positive");
  require(finite(eps) && eps >= 0, "oscillatory: eps must be nonnegative");
  WeightParams p;
  p.a = a;
  p.eps = eps;
  return {Family::oscillatory, p, {std::max(0.0, 4 * a - 2 * eps), 4 * a + 2 * eps}};
}

WeightFunction WeightFunction::potential_defined(double a, double psi_amplitude,
                                                 double psi_radius) {
  require(finite(a) && a > 0, "potential_defined: a must be positive");
  require(finite(psi_amplitude) && psi_amplitude >= 0,
          "potential_defined: psi_amplitude must be nonnegative");
  require(finite(psi_radius) && psi_radius > 0, "potential_defined: psi_radius must be positive");
  WeightParams p;
  p.a = a;
  p.psi_amplitude = psi_amplitude;
  p.psi_radius = psi_radius;
  return {Family::potential_defined, p, {4 * a, 4 * a + psi_amplitude}};
}

WeightFunction WeightFunction::with_bounds(double m, double M) const {
  require(finite(m) && finite(M) && 0 <= m && m <= M, "laplacian_bounds: need 0 <= m <= M");
  WeightFunction out = *this;
  out.bounds_ = {m, M};
  return out;
}

WeightFunction WeightFunction::with_harmonic_term(std::vector<std::complex<double>> coefficients) const {
  for (const auto& h : coefficients) require(finite(h), "harmonic term: non-finite coefficient");
  WeightFunction out = *this;
  if (out.harmonic_.size() < coefficients.size()) out.harmonic_.resize(coefficients.size());
  for (std::size_t k = 0; k < coefficients.size(); ++k) out.harmonic_[k] += coefficients[k];
  out.refresh_truncation_hint();
  return out;
}

WeightFunction translate_weight(const WeightFunction& w, std::complex<double> z0) {
  if (z0 == std::complex<double>{}) return w;
  WeightFunction out = w;
  if (!out.shifts_.empty() && out.shifts_.back() == -z0)
    out.shifts_.pop_back();
  else
    out.shifts_.push_back(z0);
  out.refresh_truncation_hint();
  return out;
}

WeightFunction segal_bargmann_density(double t) {
  require(finite(t) && t > 0, "segal_bargmann_density: t must be positive");
  return WeightFunction::gaussian_harmonic(1 / t, {}, {}, std::log(std::numbers::pi * t));
}

LaplacianReport validate_laplacian_bounds(const WeightFunction& w,
                                          std::span<const std::complex<double>> grid, double tol) {
  if (grid.empty()) throw ConfigError("validate_laplacian_bounds: empty grid");
  LaplacianReport report;
  const auto [m, M] = w.laplacian_bounds();
  const auto field = [&](std::complex<double> z) { return w.value(z); };
  report.min_value = std::numeric_limits<double>::infinity();
  report.max_value = -std::numeric_limits<double>::infinity();
  for (const auto& z : grid) {
    const double lap = w.laplacian(z);
    report.min_value = std::min(report.min_value, lap);
    report.max_value = std::max(report.max_value, lap);
    if (lap < m - tol || lap > M + tol) {
      if (report.pass) report.first_violation = z;
      report.pass = false;
    }
    const double fd = fd_laplacian(field, z, 1e-3);
    const double gap = std::abs(fd - lap);
    report.max_discrepancy = std::max(report.max_discrepancy, gap);
    if (gap > tol * (1 + std::abs(lap))) report.agreement = false;
  }
  if (!report.pass) {
    std::ostringstream os;
    os << "laplacian outside [" << m << ", " << M << "] at " << *report.first_violation;
    report.notes.push_back(os.str());
  }
  return report;
}

double truncation_hint(const WeightFunction& w, int degree) {
  if (degree < 0) throw ConfigError("truncation_hint: degree must be nonnegative");
  const double phi0 = w.value(std::complex<double>{});
  const double target = 18 * std::log(10.0);
  const auto excess = [&](double R) {
    constexpr int kAngles = 256;
    double phi_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kAngles; ++j)
      phi_min = std::min(phi_min, w.value(std::polar(R, 2 * std::numbers::pi * j / kAngles)));
    return (phi_min - phi0) - (2 * degree + 1) * std::log(R) - target;
  };
  double lo = 1.0, hi = 2.0;
  while (excess(hi) <= 0) {
    lo = hi;
    hi *= 2;
    if (hi > 1e6) throw NumericError("truncation_hint: weight does not decay fast enough");
  }
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = (lo + hi) / 2;
    (excess(mid) > 0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace fockbound
