#include "fockbound/grids.hpp"

#include <cmath>
#include <numbers>

#include "fockbound/core.hpp"

namespace fockbound {

std::vector<std::complex<double>> spaced_disk_grid(std::complex<double> center, double radius,
                                                   double spacing) {
  if (!(radius > 0) || !(spacing > 0)) throw ConfigError("spaced_disk_grid: need positive sizes");
  const int half = int(std::floor(radius / spacing + 1e-9));
  std::vector<std::complex<double>> out;
  for (int j = -half; j <= half; ++j)
    for (int i = -half; i <= half; ++i) {
      const std::complex<double> off(i * spacing, j * spacing);
      if (std::abs(off) <= radius * (1 + 1e-12)) out.push_back(center + off);
    }
  return out;
}

std::vector<std::complex<double>> random_disk_points(std::size_t n, std::complex<double> center,
                                                     double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::complex<double>> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = radius * std::sqrt(unit(rng));
    const double theta = 2 * std::numbers::pi * unit(rng);
    out.push_back(center + std::polar(r, theta));
  }
  return out;
}

std::vector<std::complex<double>> polar_grid(std::complex<double> center, double radius,
                                             int rings, int angles) {
  if (rings < 2 || angles < 1) throw ConfigError("polar_grid: need rings >= 2, angles >= 1");
  std::vector<std::complex<double>> out{center};
  for (int k = 1; k < rings; ++k) {
    const double r = radius * k / (rings - 1);
    for (int j = 0; j < angles; ++j)
      out.push_back(center + std::polar(r, 2 * std::numbers::pi * j / angles));
  }
  return out;
}

}  // namespace fockbound
