#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace fockbound {

/// Square lattice with the given spacing, clipped to the closed disk
/// D(center, radius); row-major from the lower-left corner.
std::vector<std::complex<double>> spaced_disk_grid(std::complex<double> center, double radius,
                                                   double spacing);

/// n points uniformly distributed (by area) in D(center, radius).
std::vector<std::complex<double>> random_disk_points(std::size_t n, std::complex<double> center,
                                                     double radius, std::mt19937_64& rng);

/// Polar grid: rings of radius k·radius/(rings−1) with `angles` points each
/// (the center appears once).
std::vector<std::complex<double>> polar_grid(std::complex<double> center, double radius,
                                             int rings, int angles);

}  // namespace fockbound
