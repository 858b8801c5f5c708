#include "doctest.h"

#include <random>

#include "fockbound/bounds.hpp"
#include "fockbound/grids.hpp"
#include "oracles.hpp"

using namespace fockbound;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

QuadratureRule<double> plane_rule(const WeightFunction& w, int n = 256) {
  return truncated_plane_rule<double>(w.truncation_hint(), n, n);
}

}  // namespace

TEST_CASE("constant case: Gaussian") {
  const auto w = WeightFunction::gaussian(1.0);
  const auto grid = spaced_disk_grid({}, 1.5, 0.25);
  const auto cert = constant_case_certificate(w, grid, 40, plane_rule(w));
  CHECK(cert.tag == BoundKind::constant_case);
  CHECK(cert.constant_C == doctest::Approx(1 / kPi).epsilon(1e-15));
  CHECK(cert.measured_min >= 1 / kPi - 1e-4);
  CHECK(cert.measured_sup <= 1 / kPi + 1e-4);
  CHECK(cert.pass);
  CHECK(cert.values.size() == grid.size());
}

TEST_CASE("constant case: scaled Gaussian and harmonic perturbation") {
  const auto grid = spaced_disk_grid({}, 1.5, 0.25);
  const double t = 0.5;
  const auto scaled = WeightFunction::gaussian(t);
  const auto c1 = constant_case_certificate(scaled, grid, 40, plane_rule(scaled));
  CHECK(c1.constant_C == doctest::Approx(1 / (kPi * t)).epsilon(1e-14));
  CHECK(c1.pass);

  const auto perturbed = WeightFunction::gaussian_harmonic(1.0, {0.3, 0.0});
  const auto c2 = constant_case_certificate(perturbed, grid, 40, plane_rule(perturbed));
  CHECK(c2.constant_C == doctest::Approx(1 / kPi).epsilon(1e-14));
  CHECK(c2.pass);
  CHECK((c2.measured_sup - c2.measured_min) / c2.measured_sup <= 1e-3);

  const auto osc = WeightFunction::oscillatory(1.0, 0.5);
  CHECK_THROWS_AS(constant_case_certificate(osc, grid, 20, plane_rule(osc, 64)), ValidationFailure);
}

TEST_CASE("mean value property") {
  const auto rule = [](double s) { return disk_rule<double>({}, s, 64, 128); };
  const auto one = mean_value_check(monomial(0), 0.3, rule(0.3), 1e-14);
  CHECK(one.pass);
  CHECK(std::abs(one.mean - 1.0) < 1e-14);
  CHECK(mean_value_check(monomial(2), 0.5, rule(0.5), 1e-12).pass);
  const SampleFunction e{{1.0}, {1.0, 0.0}};
  const auto ex = mean_value_check(e, 0.9, rule(0.9), 1e-8);
  CHECK(ex.pass);
  CHECK(std::abs(ex.value_at_zero - 1.0) == 0);
  CHECK_THROWS_AS(mean_value_check(e, 0.5, rule(0.9), 1e-8), ConfigError);
  CHECK_THROWS_AS(mean_value_check(e, 1.0, disk_rule<double>({}, 1.0, 8, 8), 1e-8), ConfigError);
}

TEST_CASE("lemma constant") {
  const auto& B = certified_B();
  CHECK(B.value >= B.bracket_lo);
  CHECK(B.value <= B.bracket_hi);
  CHECK(lemma_constant(B.value, 4.0) == std::exp((B.value + 0.25) * 4.0) / kPi);
  CHECK(lemma_constant(0.0, 4.0) == doctest::Approx(std::exp(1.0) / kPi));
  CHECK(&certified_B() == &B);
}

TEST_CASE("local bound certificate") {
  const auto w = WeightFunction::gaussian(1.0);
  const double disk_mass =
      oracle::radial_integral([](double r) { return std::exp(-r * r); }, 1.0);
  REQUIRE(disk_mass == doctest::Approx(kPi * (1 - std::exp(-1.0))).epsilon(1e-12));

  const std::vector<SampleFunction> basic{monomial(0), monomial(1)};
  const auto cert = local_bound_certificate(w, 4.0, basic, 128);
  REQUIRE(cert.values.size() == 2);
  CHECK(cert.values[0] == doctest::Approx(1 / disk_mass).epsilon(1e-10));
  CHECK(cert.values[0] == doctest::Approx(0.5036).epsilon(1e-4));
  CHECK(cert.values[1] == 0);
  CHECK(cert.pass);
  CHECK(cert.constant_C == lemma_constant(cert.B_used, 4.0));
  REQUIRE(cert.tighter_C.has_value());
  CHECK(*cert.tighter_C > cert.measured_sup);

  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> degree(0, 10);
  std::vector<SampleFunction> samples;
  for (int i = 0; i < 50; ++i) samples.push_back(random_polynomial(degree(rng), rng));
  const auto many = local_bound_certificate(w, 4.0, samples, 128);
  CHECK(many.values.size() == 50);
  CHECK(many.pass);
  CHECK(many.measured_sup < many.constant_C);

  const std::vector<SampleFunction> zero{SampleFunction{{0.0}}};
  const auto skipped = local_bound_certificate(w, 4.0, zero, 32);
  CHECK(skipped.values.empty());
  CHECK(skipped.notes.size() == 1);

  CHECK_THROWS_AS(local_bound_certificate(w, 3.0, basic, 32), ValidationFailure);
}

TEST_CASE("global certificate") {
  const auto w = WeightFunction::gaussian(1.0);
  const auto grid = spaced_disk_grid({}, 2.0, 0.25);
  const auto cert = global_certificate(w, 4.0, grid, 40, plane_rule(w));
  CHECK(cert.measured_sup == doctest::Approx(1 / kPi).epsilon(1e-6));
  CHECK(cert.constant_C >= std::exp(1.0) / kPi);
  CHECK(cert.constant_C == std::exp((cert.B_used + 0.25) * cert.M) / kPi);
  CHECK(cert.margin == cert.constant_C - cert.measured_sup);
  CHECK(cert.pass);

  const auto osc = WeightFunction::oscillatory(1.0, 0.5);
  const auto osc_grid = spaced_disk_grid({}, 2.0, 0.1);
  const auto oc = global_certificate(osc, 5.0, osc_grid, 40, plane_rule(osc));
  CHECK(oc.pass);
  CHECK(oc.error_estimate < 1e-6);
  CHECK(oc.values.size() == osc_grid.size());
}

TEST_CASE("translation equivariance") {
  std::mt19937_64 rng(31);
  const auto centers = random_disk_points(5, {}, 2.0, rng);
  const std::vector<WeightFunction> weights{
      WeightFunction::gaussian_harmonic(1.0, {0.2, 0.1}, {0.3, 0.0}),
      WeightFunction::oscillatory(1.0, 0.5)};
  for (const auto& w : weights) {
    const auto rule = truncated_plane_rule<double>(w.truncation_hint() + 2.0, 192, 192);
    for (const auto& z0 : centers) {
      const auto r = translation_equivariance(w, z0, 30, rule);
      CHECK(r.relative_gap < 1e-6);
    }
  }
}

TEST_CASE("doubling the density halves the kernel") {
  const auto w = WeightFunction::oscillatory(1.0, 0.5);
  const auto doubled = w.with_harmonic_term({-std::log(2.0)});
  const auto rule = plane_rule(w, 128);
  for (const cd z : {cd(0, 0), cd(0.7, -0.4)}) {
    const double k = kernel_diag(w, 30, rule, z);
    const double k2 = kernel_diag(doubled, 30, rule, z);
    CHECK(k2 == doctest::Approx(k / 2).epsilon(1e-10));
    CHECK(k2 * std::exp(-doubled.value(z)) == doctest::Approx(k * std::exp(-w.value(z))).epsilon(1e-10));
  }
}

TEST_CASE("pointwise chain") {
  const auto w = WeightFunction::gaussian(1.0);
  const auto unit = translated_pointwise_check(w, monomial(0), {}, 128);
  CHECK(unit.pass);
  const double disk_mass = kPi * (1 - std::exp(-1.0));
  CHECK(unit.local_bound == doctest::Approx(unit.constant_C * disk_mass).epsilon(1e-10));

  CHECK(translated_pointwise_check(w, monomial(1), {1.0, 0.0}, 128).pass);

  std::mt19937_64 rng(37);
  const auto zs = random_disk_points(100, {}, 2.0, rng);
  int failures = 0;
  for (const auto& z : zs)
    if (!translated_pointwise_check(w, random_polynomial(8, rng), z, 96).pass) ++failures;
  CHECK(failures == 0);
}
