#include "fockbound/bounds.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fockbound/grids.hpp"

namespace fockbound {

namespace {

constexpr double kPi = std::numbers::pi;

void summarize(BoundCertificate& cert) {
  if (cert.values.empty()) {
    cert.measured_sup = cert.measured_min = 0.0;
  } else {
    const auto [lo, hi] = std::minmax_element(cert.values.begin(), cert.values.end());
    cert.measured_min = *lo;
    cert.measured_sup = *hi;
  }
  cert.margin = cert.constant_C - cert.measured_sup;
}

std::vector<double> weighted_diagonal(const KernelEstimate<double>& k, const WeightFunction& w,
                                      std::span<const std::complex<double>> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& z : grid) out.push_back(k.diag(z) * std::exp(-w.value(z)));
  return out;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

std::string_view tag_name(BoundKind tag) {
  switch (tag) {
    case BoundKind::constant_case: return "constant_case";
    case BoundKind::local_lemma: return "local_lemma";
    case BoundKind::global: return "global";
  }
  return "unknown";
}

const BConstant& certified_B(const BoundOptions& options) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, BConstant> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(options.b_resolution, options.b_grid);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, compute_B(options.b_resolution, options.b_grid)).first;
  return it->second;
}

double lemma_constant(double B, double M) { return std::exp((B + 0.25) * M) / kPi; }

BoundCertificate constant_case_certificate(const WeightFunction& w,
                                           std::span<const std::complex<double>> grid, int N,
                                           const QuadratureRule<double>& rule, double tol) {
  if (grid.empty()) throw ConfigError("constant_case_certificate: empty grid");
  auto check_points = spaced_disk_grid({}, 2.0, 0.1);
  check_points.insert(check_points.end(), grid.begin(), grid.end());
  const double c = w.laplacian(check_points.front());
  for (const auto& z : check_points) {
    const double lap = w.laplacian(z);
    if (std::abs(lap - c) > 1e-9 * (1 + std::abs(c))) {
      std::ostringstream os;
      os << "constant_case_certificate: Laplacian is not constant (" << c << " vs " << lap
         << " at " << z << ")";
      throw ValidationFailure(os.str());
    }
  }
  if (!(c > 0)) throw ValidationFailure("constant_case_certificate: Laplacian must be positive");

  BoundCertificate cert;
  cert.tag = BoundKind::constant_case;
  cert.constant_C = c / (4 * kPi);
  cert.grid.assign(grid.begin(), grid.end());
  cert.N = N;
  cert.resolution = rule.n_r;
  cert.M = c;

  const KernelEstimate<double> fine(w, N, rule);
  const KernelEstimate<double> coarse(w, N, half_resolution(rule));
  cert.values = weighted_diagonal(fine, w, grid);
  cert.error_estimate = max_gap(cert.values, weighted_diagonal(coarse, w, grid));
  summarize(cert);
  if (fine.degraded()) cert.notes.push_back("kernel degree reduced to " + std::to_string(fine.degree()));

  const double deviation = std::max(cert.measured_sup - cert.constant_C,
                                    cert.constant_C - cert.measured_min);
  cert.pass = deviation <= tol + 3 * cert.error_estimate;
  return cert;
}

MeanValueReport mean_value_check(const SampleFunction& h, double s,
                                 const QuadratureRule<double>& rule, double tol) {
  if (!(s > 0 && s < 1)) throw ConfigError("mean_value_check: s must lie in (0, 1)");
  if (rule.region.kind != RegionKind::disk || rule.region.center != std::complex<double>{} ||
      std::abs(rule.region.radius - s) > 1e-14 * s)
    throw ConfigError("mean_value_check: rule must cover D(0, s)");
  MeanValueReport report;
  report.mean = integrate(rule, [&](std::complex<double> z) { return h(z); }) / (kPi * s * s);
  report.value_at_zero = h(std::complex<double>{});
  report.error = std::abs(report.mean - report.value_at_zero);
  report.pass = report.error <= tol;
  return report;
}

BoundCertificate local_bound_certificate(const WeightFunction& w, double M,
                                         std::span<const SampleFunction> samples, int resolution,
                                         const BoundOptions& options) {
  PotentialField pf = make_psi(w, M);
  pf.resolution = resolution;
  const BConstant& B = certified_B(options);

  BoundCertificate cert;
  cert.tag = BoundKind::local_lemma;
  cert.B_used = B.value;
  cert.M = M;
  cert.resolution = resolution;
  cert.constant_C = lemma_constant(B.value, M);
  cert.grid = {std::complex<double>{}};
  cert.tighter_C = std::exp(B.value * M - pf.phi({})) / kPi;

  const auto rule = disk_rule<double>({}, 1.0, resolution, 2 * resolution);
  const double phi0 = w.value(std::complex<double>{});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& f = samples[i];
    const auto local = integrate_estimated(rule, [&](std::complex<double> z) {
      return std::norm(f(z)) * std::exp(-w.value(z));
    });
    if (!(local.value > 0)) {
      cert.notes.push_back("sample " + std::to_string(i) + " skipped: zero integral over D(0,1)");
      continue;
    }
    const double ratio = std::norm(f(std::complex<double>{})) * std::exp(-phi0) / local.value;
    cert.values.push_back(ratio);
    cert.error_estimate = std::max(cert.error_estimate, ratio * local.error_estimate / local.value);
  }
  summarize(cert);
  cert.pass = cert.margin > 3 * cert.error_estimate;
  return cert;
}

BoundCertificate global_certificate(const WeightFunction& w, double M,
                                    std::span<const std::complex<double>> grid, int N,
                                    const QuadratureRule<double>& rule,
                                    const BoundOptions& options) {
  if (grid.empty()) throw ConfigError("global_certificate: empty grid");
  make_psi(w, M);  // hypothesis check only
  const BConstant& B = certified_B(options);

  BoundCertificate cert;
  cert.tag = BoundKind::global;
  cert.B_used = B.value;
  cert.M = M;
  cert.N = N;
  cert.resolution = rule.n_r;
  cert.constant_C = lemma_constant(B.value, M);
  cert.grid.assign(grid.begin(), grid.end());

  const KernelEstimate<double> fine(w, N, rule);
  const KernelEstimate<double> coarse(w, N, half_resolution(rule));
  cert.values = weighted_diagonal(fine, w, grid);
  cert.error_estimate = max_gap(cert.values, weighted_diagonal(coarse, w, grid));
  if (fine.degraded()) cert.notes.push_back("kernel degree reduced to " + std::to_string(fine.degree()));
  summarize(cert);
  cert.pass = cert.margin > 3 * cert.error_estimate;
  return cert;
}

EquivarianceReport translation_equivariance(const WeightFunction& w, std::complex<double> z0,
                                            int N, const QuadratureRule<double>& rule) {
  const auto at_origin = recentered(rule, std::complex<double>{});
  const auto moved = translate_weight(w, z0);
  EquivarianceReport report;
  report.translated_at_zero =
      kernel_diag(moved, N, at_origin, {}) * std::exp(-moved.value(std::complex<double>{}));
  report.original_at_z0 = kernel_diag(w, N, recentered(rule, z0), z0) * std::exp(-w.value(z0));
  report.relative_gap =
      std::abs(report.translated_at_zero - report.original_at_z0) / report.original_at_z0;
  return report;
}

ChainReport translated_pointwise_check(const WeightFunction& w, const SampleFunction& f,
                                       std::complex<double> z, int resolution,
                                       std::optional<double> M, const BoundOptions& options) {
  const double m = M.value_or(w.laplacian_bounds().second);
  ChainReport report;
  report.constant_C = lemma_constant(certified_B(options).value, m);
  const auto density = [&](std::complex<double> u) { return std::norm(f(u)) * std::exp(-w.value(u)); };

  const int degree = f.is_polynomial() ? f.degree() : kDefaultMaxDegree;
  const double R = std::max(truncation_hint(w, degree), std::abs(z) + 1);
  const double scale = report.constant_C * std::exp(w.value(z));
  report.value = std::norm(f(z));
  report.local_bound = scale * integrate(disk_rule<double>(z, 1.0, resolution, 2 * resolution), density);
  report.global_bound = scale * integrate(truncated_plane_rule<double>(R, resolution, 2 * resolution), density);
  constexpr double slack = 1e-9;
  report.pass = report.value <= report.local_bound * (1 + slack) &&
                report.local_bound <= report.global_bound * (1 + slack);
  return report;
}

}  // namespace fockbound
