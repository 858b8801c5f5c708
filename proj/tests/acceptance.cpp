// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fockbound/bounds.hpp"
#include "fockbound/equivalence.hpp"
#include "fockbound/grids.hpp"
#include "fockbound/kernel.hpp"
#include "fockbound/potential.hpp"

using namespace fockbound;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

QuadratureRule<double> plane_rule(const WeightFunction& w, int N, int resolution) {
  return truncated_plane_rule<double>(truncation_hint(w, N), resolution, 2 * resolution);
}

Outcome fundamental_integral() {
  const auto rule = disk_rule<double>({}, 1.0, 64, 128);
  const double I = integrate(rule, [](cd z) { return gamma<double>(z); });
  const double err = std::abs(I + 0.25);
  return {err <= 1e-6, "integral of Gamma over D(0,1) = " + sci(I) + ", |I + 1/4| = " + sci(err) + " (tol 1e-6)"};
}

Outcome segal_bargmann_exactness() {
  const auto w = segal_bargmann_density(1.0);
  const auto rule = truncated_plane_rule<double>(10.0, 256, 512);
  const KernelEstimate<double> k(w, 40, rule);
  double worst = 0;
  for (const cd z : {cd(0, 0), cd(0.5, 0), cd(1, 0), cd(1, 1), cd(1.5, 0)})
    worst = std::max(worst, std::abs(k.diag(z) / std::exp(std::norm(z)) - 1));
  return {worst <= 1e-6, "max relative error vs e^{|z|^2} = " + sci(worst) + " (tol 1e-6)"};
}

Outcome constant_case_flatness() {
  const auto w = WeightFunction::gaussian_harmonic(1.0, {0.3, 0.0});
  const auto grid = spaced_disk_grid({}, 1.5, 0.1);
  const KernelEstimate<double> k(w, 40, plane_rule(w, 40, 256));
  double worst = 0;
  for (const auto& z : grid) worst = std::max(worst, std::abs(k.diag(z) * std::exp(-w.value(z)) * kPi - 1));
  return {worst <= 1e-3, std::to_string(grid.size()) + " points, max relative deviation from 1/pi = " +
                             sci(worst) + " (tol 1e-3)"};
}

Outcome poisson_residual() {
  const double M = 5.0;
  PotentialField pf = make_psi(WeightFunction::oscillatory(1.0, 0.5), M);
  pf.resolution = 256;
  const auto grid = spaced_disk_grid({}, 0.9, 0.3);
  PoissonCheck check;
  check.max_points = grid.size();
  const auto report = verify_potential_bounds(pf, grid, 1e-3, check);
  const double tol = 5e-3 * (1 + M);
  const bool pass = report.max_poisson_residual <= tol;
  return {pass, std::to_string(grid.size()) + " interior points, max |fd Laplacian(Phi) - psi| = " +
                    sci(report.max_poisson_residual) + " (tol " + sci(tol) + ")"};
}

Outcome potential_constants() {
  const BConstant B = compute_B(128, 17);
  const BConstant B2 = compute_B(256, 33);
  const double drift = std::abs(B2.value - B.value);
  bool pass = B.value >= 0 && B.value <= 2.1972 && drift < 1e-3;
  std::ostringstream os;
  os << "B_used = " << sci(B.value) << ", doubling drift " << sci(drift);

  std::mt19937_64 rng(5);
  const auto grid = random_disk_points(200, {}, 1.0, rng);
  const std::vector<std::pair<WeightFunction, double>> cases{
      {WeightFunction::gaussian(1.0), 4.0},
      {WeightFunction::oscillatory(1.0, 0.5), 5.0},
      {WeightFunction::potential_defined(1.0, 1.0, 0.5), 5.0}};
  for (const auto& [w, M] : cases) {
    PotentialField pf = make_psi(w, M);
    pf.B_used = B.value;
    PoissonCheck none;
    none.max_points = 0;
    const auto report = verify_potential_bounds(pf, grid, 0.0, none);
    const bool upper = report.max_phi <= B.value * M + 1e-3;
    const bool lower = report.phi_at_zero >= -M / 4 - 1e-4;
    pass = pass && upper && lower;
    os << "; " << family_name(w.family()) << ": max Phi " << sci(report.max_phi) << " <= " << sci(B.value * M)
       << ", Phi(0) " << sci(report.phi_at_zero) << " >= " << sci(-M / 4);
  }
  return {pass, os.str()};
}

Outcome global_certificates() {
  const std::vector<std::pair<WeightFunction, double>> cases{
      {WeightFunction::gaussian(1.0), 4.0},
      {WeightFunction::gaussian_harmonic(1.0, {0.3, 0.0}, {0.5, 0.2}), 4.0},
      {WeightFunction::oscillatory(1.0, 0.5), 5.0},
      {WeightFunction::potential_defined(1.0, 1.0, 0.5), 5.0}};
  const auto grid = spaced_disk_grid({}, 2.0, 0.1);
  bool pass = true;
  std::ostringstream os;
  for (const auto& [w, M] : cases) {
    const auto cert = global_certificate(w, M, grid, 40, plane_rule(w, 40, 256));
    pass = pass && cert.pass && cert.measured_sup <= cert.constant_C;
    if (os.tellp() > 0) os << "; ";
    os << family_name(w.family()) << ": sup " << sci(cert.measured_sup) << " <= C " << sci(cert.constant_C)
       << " (err " << sci(cert.error_estimate) << ")";
  }
  return {pass, os.str()};
}

Outcome sampled_functions() {
  const std::vector<std::pair<WeightFunction, double>> cases{
      {WeightFunction::gaussian_harmonic(1.0, {0.3, 0.0}, {0.5, 0.2}), 4.0},
      {WeightFunction::oscillatory(1.0, 0.5), 5.0}};
  std::mt19937_64 rng(11);
  int c_violations = 0, k_violations = 0, trials = 0;
  constexpr int N = 20;
  for (const auto& [w, M] : cases) {
    const auto rule = plane_rule(w, N, 128);
    const KernelEstimate<double> k(w, N, rule);
    const double C = lemma_constant(certified_B().value, M);
    std::uniform_int_distribution<int> degree(0, k.degree());
    const auto zs = random_disk_points(250, {}, 2.0, rng);
    for (const auto& z : zs) {
      const auto f = random_polynomial(degree(rng), rng);
      const double norm2 = weighted_norm2(w, f, rule);
      const double value = std::norm(f(z));
      if (value > C * std::exp(w.value(z)) * norm2) ++c_violations;
      if (value > k.diag(z) * norm2 * (1 + 1e-8)) ++k_violations;
      ++trials;
    }
  }
  return {c_violations == 0 && k_violations == 0,
          std::to_string(trials) + " trials, " + std::to_string(c_violations) + " violations of C, " +
              std::to_string(k_violations) + " of the kernel diagonal"};
}

Outcome equivalence_suite() {
  bool pass = true;
  std::ostringstream os;
  std::mt19937_64 rng(13);
  const auto residual_points = random_disk_points(100, {}, 3.0, rng);
  std::uniform_int_distribution<int> degree(0, 10);
  std::vector<SampleFunction> samples;
  for (int i = 0; i < 10; ++i) samples.push_back(random_polynomial(degree(rng), rng));
  double worst_unitary = 0;
  for (double c : {1.0, 4.0, 10.0}) {
    const WeightDensity a{WeightFunction::gaussian_harmonic(c / 4, {0.05, 0.02}, {0.3, -0.2}, 0.5)};
    const auto m = map_to_segal_bargmann(a);
    const double R = std::max(truncation_hint(a.phi, 30), truncation_hint(m.target().phi, 30)) + 2;
    const auto u = verify_unitary(m, samples, truncated_plane_rule<double>(R, 256, 512), 1e-5);
    worst_unitary = std::max(worst_unitary, u.max_relative_error);
    pass = pass && u.pass && m.residual(residual_points) <= 1e-10;
  }
  os << "c in {1,4,10}: max unitary error " << sci(worst_unitary) << " (tol 1e-5)";

  const WeightDensity a{WeightFunction::gaussian(1.0)};
  const WeightDensity b{WeightFunction::gaussian_harmonic(1.0, {}, {2.0, 0.0})};
  const auto inv = verify_kernel_invariance(a, b, std::vector<cd>{{0, 0}, {1, 0}, {0, 1}}, 40,
                                            truncated_plane_rule<double>(12.0, 256, 512), 1e-4);
  pass = pass && inv.pass;
  os << "; kernel invariance gap " << sci(inv.max_relative_gap) << " (tol 1e-4)";

  const WeightDensity steep{WeightFunction::gaussian(0.5)};
  const bool criterion = log_laplacian_equal(a, steep, spaced_disk_grid({}, 2.0, 0.25), 1e-9).equal;
  bool rejected = false;
  try {
    build_equivalence_map(a, steep);
  } catch (const UnsupportedCase&) {
    rejected = true;
  }
  pass = pass && !criterion && rejected;
  os << "; negative control " << (!criterion && rejected ? "rejected" : "NOT rejected");
  return {pass, os.str()};
}

Outcome mean_values() {
  const std::vector<SampleFunction> hs{monomial(0), monomial(1), monomial(2), SampleFunction{{1.0}, {1.0, 0.0}}};
  double worst = 0;
  for (double s : {0.3, 0.9}) {
    const auto rule = disk_rule<double>({}, s, 64, 128);
    for (const auto& h : hs) worst = std::max(worst, mean_value_check(h, s, rule, 1e-8).error);
  }
  return {worst <= 1e-8, "max |mean - h(0)| = " + sci(worst) + " (tol 1e-8)"};
}

Outcome monotonicity() {
  const auto w = WeightFunction::oscillatory(1.0, 0.5);
  const KernelEstimate<double> k(w, 40, plane_rule(w, 40, 192));
  std::mt19937_64 rng(17);
  int violations = 0;
  double worst = 0;
  for (const auto& z : random_disk_points(20, {}, 2.0, rng)) {
    const auto kn = k.diag_by_degree(z);
    for (int n = 5; n < 40; ++n) {
      const double drop = (kn(n) - kn(n + 1)) / kn(n);
      worst = std::max(worst, drop);
      if (drop > 1e-10) ++violations;
    }
  }
  return {violations == 0 && k.degree() == 40,
          "20 points, N = 5..40, " + std::to_string(violations) + " violations, largest relative drop " + sci(worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fockbound_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"experiment": "equivalence",
  "weight": {"family": "gaussian", "params": {"t": 1.0}},
  "weight_b": {"family": "gaussian_harmonic",
               "params": {"a": 1.0, "b_re": 0.0, "b_im": 0.0, "c_re": 1.0, "c_im": -0.5, "d": 0.2}},
  "grid": {"kind": "random", "radius": 2.0, "count": 50},
  "samples": 5, "N": 30, "resolution": 128})";
  }
  std::vector<std::string> files;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + FOCKBOUND_CLI_PATH + "\" equivalence --config \"" +
                            (dir / "config.json").string() + "\" --seed 1234 --out \"" + (dir / run).string() +
                            "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    if (entry.path().extension() != ".csv") continue;
    const auto other = dir / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other))
      return {false, entry.path().filename().string() + " differs between runs"};
    ++compared;
  }
  fs::remove_all(dir);
  return {compared > 0, std::to_string(compared) + " CSV files byte-identical across two runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fundamental integral", fundamental_integral},
      {"Segal-Bargmann exactness", segal_bargmann_exactness},
      {"constant-Laplacian flatness", constant_case_flatness},
      {"Poisson residual", poisson_residual},
      {"potential constants", potential_constants},
      {"global certificate", global_certificates},
      {"sampled-f oracle", sampled_functions},
      {"equivalence suite", equivalence_suite},
      {"mean-value property", mean_values},
      {"kernel monotonicity in N", monotonicity},
      {"CLI determinism", cli_determinism}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
