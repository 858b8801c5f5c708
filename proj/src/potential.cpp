#include "fockbound/potential.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "fockbound/grids.hpp"

namespace fockbound {

double masked_log_integral(std::complex<double> omega, int resolution,
                           const BIntegrand& integrand) {
  const auto rule = masked_disk_rule<double>(omega, 2.0, {}, 1.0, resolution, 2 * resolution);
  if (integrand) return integrate(rule, integrand);
  return integrate(rule, [](std::complex<double> zeta) { return std::log(std::abs(zeta)); });
}

namespace {

struct GridMax {
  double value = -std::numeric_limits<double>::infinity();
  std::complex<double> at{};
};

GridMax masked_sup(int rings, int angles, int resolution, const BIntegrand& integrand) {
  GridMax best;
  for (const auto& omega : polar_grid({}, 1.0, rings, angles)) {
    const double v = masked_log_integral(omega, resolution, integrand) / (2 * std::numbers::pi);
    if (v > best.value) best = {v, omega};
  }
  return best;
}

}  // namespace

BConstant compute_B(int resolution, int omega_grid_size, const BIntegrand& integrand) {
  if (omega_grid_size < 9) throw ConfigError("compute_B: omega_grid_size must be >= 9");
  if (resolution < 4) throw ConfigError("compute_B: resolution must be >= 4");
  const GridMax fine = masked_sup(omega_grid_size, omega_grid_size, resolution, integrand);
  const GridMax coarse =
      masked_sup((omega_grid_size + 1) / 2, omega_grid_size / 2, resolution, integrand);
  const double half =
      masked_log_integral(fine.at, resolution / 2, integrand) / (2 * std::numbers::pi);

  BConstant B;
  B.grid_sup = fine.value;
  B.argmax = fine.at;
  B.quadrature_error = std::abs(fine.value - half);
  B.margin = std::abs(fine.value - coarse.value) + B.quadrature_error;
  B.value = B.grid_sup + B.margin;
  return B;
}

PotentialField make_psi(const WeightFunction& w, double M,
                        std::span<const std::complex<double>> validation_grid, double tol) {
  if (!(M >= 0)) throw ConfigError("make_psi: M must be nonnegative");
  std::vector<std::complex<double>> fallback;
  if (validation_grid.empty()) {
    fallback = spaced_disk_grid({}, 2.0, 0.05);
    validation_grid = fallback;
  }
  for (const auto& z : validation_grid) {
    const double lap = w.laplacian(z);
    if (lap < -tol || lap > M + tol) {
      std::ostringstream os;
      os << "make_psi: laplacian " << lap << " outside [0, " << M << "] at " << z;
      throw ValidationFailure(os.str());
    }
  }
  PotentialField pf;
  pf.weight = w;
  pf.M = M;
  pf.psi = ScalarField<double>(
      [w](std::complex<double> z) { return cutoff_g(z) * w.laplacian(z); }, 2.0);
  return pf;
}

PotentialField zero_potential(double M, int resolution) {
  PotentialField pf;
  pf.weight = WeightFunction::gaussian(1.0);
  pf.M = M;
  pf.resolution = resolution;
  pf.psi = ScalarField<double>([](std::complex<double>) { return 0.0; }, 2.0);
  return pf;
}

PotentialReport verify_potential_bounds(const PotentialField& pf,
                                        std::span<const std::complex<double>> grid_in_unit_disk,
                                        double tol, const PoissonCheck& poisson) {
  PotentialReport report;
  report.upper_limit = pf.B_used * pf.M + tol;
  report.lower_limit = -pf.M / 4 - tol;
  report.poisson_tol = poisson.tol > 0 ? poisson.tol : 5e-3 * (1 + pf.M);
  report.max_phi = -std::numeric_limits<double>::infinity();

  const auto phi = [&](std::complex<double> z) { return pf.phi(z); };
  for (const auto& w : grid_in_unit_disk) {
    const double v = phi(w);
    report.max_phi = std::max(report.max_phi, v);
    if (v > report.upper_limit) {
      if (report.upper_ok) {
        std::ostringstream os;
        os << "Phi(" << w << ") = " << v << " exceeds B*M + tol = " << report.upper_limit;
        report.notes.push_back(os.str());
      }
      report.upper_ok = false;
    }
  }

  report.phi_at_zero = phi({});
  if (report.phi_at_zero < report.lower_limit) {
    report.lower_ok = false;
    report.notes.push_back("Phi(0) below -M/4 - tol");
  }

  std::size_t checked = 0;
  for (const auto& w : grid_in_unit_disk) {
    if (checked == poisson.max_points) break;
    if (std::abs(w) > 1 - poisson.fd_step) continue;
    ++checked;
    const double residual = std::abs(fd_laplacian(phi, w, poisson.fd_step) - pf.psi(w));
    report.max_poisson_residual = std::max(report.max_poisson_residual, residual);
  }
  report.poisson_ok = report.max_poisson_residual <= report.poisson_tol;
  if (!report.poisson_ok) report.notes.push_back("Poisson residual above tolerance");
  report.pass = report.upper_ok && report.lower_ok && report.poisson_ok;
  return report;
}

}  // namespace fockbound
