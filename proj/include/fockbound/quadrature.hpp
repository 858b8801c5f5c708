#pragma once

// Planar quadrature: polar tensor rules on disks, ray-clipped rules on a disk
// with a second disk removed, and disks standing in for the whole plane.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <type_traits>
#include <utility>

#include "fockbound/core.hpp"

namespace fockbound {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// three-term recurrence. Nodes ascend.
template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  VectorX<Scalar> x(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar z = std::cos(pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      const Scalar dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    // recompute derivative at the converged node
    Scalar p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1;
    dp = n * (z * p1 - p0) / (z * z - 1);
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = w(n - 1 - i) = 2 / ((1 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x(n / 2) = 0;
  return {x, w};
}

/// Cached rule for repeated use at a fixed order.
template <typename Scalar>
const std::pair<VectorX<Scalar>, VectorX<Scalar>>& cached_gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::pair<VectorX<Scalar>, VectorX<Scalar>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre<Scalar>(n)).first;
  return it->second;
}

enum class RegionKind { disk, masked_disk, truncated_plane };

struct Region {
  RegionKind kind = RegionKind::disk;
  std::complex<double> center{0.0, 0.0};
  double radius = 1.0;
  std::complex<double> excluded_center{0.0, 0.0};
  double excluded_radius = 0.0;

  double area() const;
  bool contains(std::complex<double> z, double slack = 1e-12) const;
};

inline bool Region::contains(std::complex<double> z, double slack) const {
  if (std::abs(z - center) > radius * (1 + slack)) return false;
  if (kind == RegionKind::masked_disk &&
      std::abs(z - excluded_center) < excluded_radius * (1 - slack))
    return false;
  return true;
}

namespace detail {

// Area of the lens D(c1, r1) ∩ D(c2, r2).
inline double disk_overlap_area(std::complex<double> c1, double r1, std::complex<double> c2,
                                double r2) {
  const double d = std::abs(c1 - c2);
  const double pi = std::numbers::pi;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return pi * r * r;
  }
  const double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
  const double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
  return r1 * r1 * (a1 - std::sin(2 * a1) / 2) + r2 * r2 * (a2 - std::sin(2 * a2) / 2);
}

}  // namespace detail

inline double Region::area() const {
  const double disk = std::numbers::pi * radius * radius;
  if (kind != RegionKind::masked_disk) return disk;
  return disk - detail::disk_overlap_area(center, radius, excluded_center, excluded_radius);
}

/// Nodes and positive area weights. Immutable once built.
template <typename Scalar>
struct QuadratureRule {
  ComplexVectorX<Scalar> nodes;
  VectorX<Scalar> weights;
  Region region;
  int n_r = 0;
  int n_theta = 0;

  Eigen::Index size() const { return nodes.size(); }
  Complex<Scalar> center() const {
    return {Scalar(region.center.real()), Scalar(region.center.imag())};
  }
};

namespace detail {

template <typename Scalar>
void check_resolution(int n_r, int n_theta, const char* who) {
  if (n_r < 2 || n_theta < 4) {
    std::ostringstream os;
    os << who << ": need n_r >= 2 and n_theta >= 4 (got " << n_r << ", " << n_theta << ")";
    throw ConfigError(os.str());
  }
}

// Appends Gauss-Legendre nodes along the ray center + r·e^{iθ}, r ∈ [lo, hi].
template <typename Scalar>
void append_ray_segment(std::vector<Complex<Scalar>>& nodes, std::vector<Scalar>& weights,
                        Complex<Scalar> center, Complex<Scalar> direction, Scalar lo, Scalar hi,
                        Scalar dtheta, const VectorX<Scalar>& gx, const VectorX<Scalar>& gw) {
  const Scalar half = (hi - lo) / 2;
  const Scalar mid = (hi + lo) / 2;
  for (Eigen::Index k = 0; k < gx.size(); ++k) {
    const Scalar r = mid + half * gx(k);
    nodes.push_back(center + r * direction);
    weights.push_back(gw(k) * half * r * dtheta);
  }
}

}  // namespace detail

/// Gauss-Legendre in radius (Jacobian folded in) times the trapezoid rule in
/// angle. No node sits at the center, so integrands with an integrable
/// singularity there (log|ζ|) are safe.
template <typename Scalar = double>
QuadratureRule<Scalar> disk_rule(Complex<Scalar> center, Scalar radius, int n_r, int n_theta) {
  if (!(radius > 0)) throw ConfigError("disk_rule: radius must be positive");
  detail::check_resolution<Scalar>(n_r, n_theta, "disk_rule");
  const auto& [gx, gw] = cached_gauss_legendre<Scalar>(n_r);
  const Scalar dtheta = 2 * pi_v<Scalar> / Scalar(n_theta);
  std::vector<Complex<Scalar>> nodes;
  std::vector<Scalar> weights;
  nodes.reserve(std::size_t(n_r) * n_theta);
  weights.reserve(std::size_t(n_r) * n_theta);
  for (int j = 0; j < n_theta; ++j) {
    const Complex<Scalar> dir = std::polar(Scalar(1), dtheta * Scalar(j));
    detail::append_ray_segment(nodes, weights, center, dir, Scalar(0), radius, dtheta, gx, gw);
  }
  QuadratureRule<Scalar> rule;
  rule.nodes = Eigen::Map<ComplexVectorX<Scalar>>(nodes.data(), Eigen::Index(nodes.size()));
  rule.weights = Eigen::Map<VectorX<Scalar>>(weights.data(), Eigen::Index(weights.size()));
  rule.region = {RegionKind::disk,
                 {double(std::real(center)), double(std::imag(center))},
                 double(radius)};
  rule.n_r = n_r;
  rule.n_theta = n_theta;
  return rule;
}

/// Like disk_rule but with radius r = R·u², u Gauss-Legendre on [0, 1]. A
/// log|ζ − center| factor becomes u³ log u in the new variable, so the
/// singular integral converges at the regular Gauss-Legendre rate.
template <typename Scalar = double>
QuadratureRule<Scalar> graded_disk_rule(Complex<Scalar> center, Scalar radius, int n_r,
                                        int n_theta) {
  if (!(radius > 0)) throw ConfigError("graded_disk_rule: radius must be positive");
  detail::check_resolution<Scalar>(n_r, n_theta, "graded_disk_rule");
  const auto& [gx, gw] = cached_gauss_legendre<Scalar>(n_r);
  const Scalar dtheta = 2 * pi_v<Scalar> / Scalar(n_theta);
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(Eigen::Index(n_r) * n_theta);
  rule.weights.resize(Eigen::Index(n_r) * n_theta);
  Eigen::Index i = 0;
  for (int j = 0; j < n_theta; ++j) {
    const Complex<Scalar> dir = std::polar(Scalar(1), dtheta * Scalar(j));
    for (int k = 0; k < n_r; ++k, ++i) {
      const Scalar u = (gx(k) + 1) / 2;
      // r dr = 2R²u³ du, du = dx/2
      rule.nodes(i) = center + radius * u * u * dir;
      rule.weights(i) = gw(k) * radius * radius * u * u * u * dtheta;
    }
  }
  rule.region = {RegionKind::disk,
                 {double(std::real(center)), double(std::imag(center))},
                 double(radius)};
  rule.n_r = n_r;
  rule.n_theta = n_theta;
  return rule;
}

/// Polar rule on D(center, radius) \ D(excluded_center, excluded_radius).
/// Each angular ray is clipped against the excluded disk and every surviving
/// radial segment gets its own n_r-point Gauss-Legendre rule, so the cut
/// circle is resolved exactly in the radial direction.
template <typename Scalar = double>
QuadratureRule<Scalar> masked_disk_rule(Complex<Scalar> center, Scalar radius,
                                        Complex<Scalar> excluded_center, Scalar excluded_radius,
                                        int n_r, int n_theta) {
  if (!(radius > 0) || !(excluded_radius > 0))
    throw ConfigError("masked_disk_rule: radii must be positive");
  detail::check_resolution<Scalar>(n_r, n_theta, "masked_disk_rule");
  const auto& [gx, gw] = cached_gauss_legendre<Scalar>(n_r);
  const Scalar dtheta = 2 * pi_v<Scalar> / Scalar(n_theta);
  const Complex<Scalar> offset = center - excluded_center;
  const Scalar c0 = std::norm(offset) - excluded_radius * excluded_radius;
  std::vector<Complex<Scalar>> nodes;
  std::vector<Scalar> weights;
  nodes.reserve(std::size_t(n_r) * n_theta);
  weights.reserve(std::size_t(n_r) * n_theta);
  for (int j = 0; j < n_theta; ++j) {
    const Complex<Scalar> dir = std::polar(Scalar(1), dtheta * Scalar(j));
    // |offset + r·dir|² < ρ²  ⇔  r² + 2br + c0 < 0
    const Scalar b = std::real(std::conj(dir) * offset);
    const Scalar disc = b * b - c0;
    Scalar cut_lo = radius, cut_hi = radius;
    if (disc > 0) {
      const Scalar s = std::sqrt(disc);
      cut_lo = std::clamp(-b - s, Scalar(0), radius);
      cut_hi = std::clamp(-b + s, Scalar(0), radius);
    }
    if (cut_hi <= cut_lo) {
      detail::append_ray_segment(nodes, weights, center, dir, Scalar(0), radius, dtheta, gx, gw);
      continue;
    }
    if (cut_lo > 0)
      detail::append_ray_segment(nodes, weights, center, dir, Scalar(0), cut_lo, dtheta, gx, gw);
    if (cut_hi < radius)
      detail::append_ray_segment(nodes, weights, center, dir, cut_hi, radius, dtheta, gx, gw);
  }
  QuadratureRule<Scalar> rule;
  rule.nodes = Eigen::Map<ComplexVectorX<Scalar>>(nodes.data(), Eigen::Index(nodes.size()));
  rule.weights = Eigen::Map<VectorX<Scalar>>(weights.data(), Eigen::Index(weights.size()));
  rule.region = {RegionKind::masked_disk,
                 {double(std::real(center)), double(std::imag(center))},
                 double(radius),
                 {double(std::real(excluded_center)), double(std::imag(excluded_center))},
                 double(excluded_radius)};
  rule.n_r = n_r;
  rule.n_theta = n_theta;
  return rule;
}

/// Disk of radius R standing in for the whole plane; R normally comes from
/// truncation_hint of the weight being integrated against.
template <typename Scalar = double>
QuadratureRule<Scalar> truncated_plane_rule(Scalar R, int n_r, int n_theta,
                                            Complex<Scalar> center = {}) {
  if (!(R > 0)) throw ConfigError("truncated_plane_rule: R must be positive");
  auto rule = disk_rule<Scalar>(center, R, n_r, n_theta);
  rule.region.kind = RegionKind::truncated_plane;
  return rule;
}

/// Same construction at half the resolution in both directions.
template <typename Scalar>
QuadratureRule<Scalar> half_resolution(const QuadratureRule<Scalar>& rule) {
  const int n_r = std::max(2, rule.n_r / 2);
  const int n_theta = std::max(4, rule.n_theta / 2);
  const auto& g = rule.region;
  const Complex<Scalar> c(g.center.real(), g.center.imag());
  switch (g.kind) {
    case RegionKind::disk:
      return disk_rule<Scalar>(c, Scalar(g.radius), n_r, n_theta);
    case RegionKind::truncated_plane:
      return truncated_plane_rule<Scalar>(Scalar(g.radius), n_r, n_theta, c);
    case RegionKind::masked_disk:
      return masked_disk_rule<Scalar>(
          c, Scalar(g.radius), Complex<Scalar>(g.excluded_center.real(), g.excluded_center.imag()),
          Scalar(g.excluded_radius), n_r, n_theta);
  }
  throw Error("half_resolution: unknown region");
}

/// The rule with every node rotated by `angle` about the region center.
template <typename Scalar>
QuadratureRule<Scalar> rotated(QuadratureRule<Scalar> rule, Scalar angle) {
  const Complex<Scalar> c = rule.center();
  const Complex<Scalar> turn = std::polar(Scalar(1), angle);
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i)
    rule.nodes(i) = c + turn * (rule.nodes(i) - c);
  return rule;
}

/// The same rule moved so that its region is centered at `center`.
template <typename Scalar>
QuadratureRule<Scalar> recentered(QuadratureRule<Scalar> rule, Complex<Scalar> center) {
  const Complex<Scalar> shift = center - rule.center();
  rule.nodes.array() += shift;
  const std::complex<double> s(double(shift.real()), double(shift.imag()));
  rule.region.center += s;
  rule.region.excluded_center += s;
  return rule;
}

/// Σ wᵢ f(zᵢ), real or complex according to f's return type. A non-finite
/// value at a node is an error naming that node.
template <typename Scalar, typename F>
auto integrate(const QuadratureRule<Scalar>& rule, const F& f) {
  using Value = std::decay_t<decltype(f(rule.nodes(0)))>;
  const auto n = std::size_t(rule.nodes.size());
  std::vector<Value> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Value v = f(rule.nodes(Eigen::Index(i)));
    if (!std::isfinite(std::abs(v))) {
      std::ostringstream os;
      os << "integrate: non-finite integrand at node " << i << " = " << rule.nodes(Eigen::Index(i));
      throw DomainError(os.str());
    }
    terms[i] = rule.weights(Eigen::Index(i)) * v;
  }
  return pairwise_sum<Value>(0, n, [&](std::size_t i) { return terms[i]; });
}

template <typename Value>
struct Estimated {
  Value value;
  double error_estimate;
};

/// Integral plus the difference against the half-resolution companion rule.
template <typename Scalar, typename F>
auto integrate_estimated(const QuadratureRule<Scalar>& rule, const F& f) {
  const auto fine = integrate(rule, f);
  const auto coarse = integrate(half_resolution(rule), f);
  return Estimated<decltype(fine)>{fine, double(std::abs(fine - coarse))};
}

template <typename Scalar>
Scalar weight_sum(const QuadratureRule<Scalar>& rule) {
  return pairwise_sum<Scalar>(0, std::size_t(rule.weights.size()),
                              [&](std::size_t i) { return rule.weights(Eigen::Index(i)); });
}

}  // namespace fockbound
