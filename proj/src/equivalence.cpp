#include "fockbound/equivalence.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fockbound {

namespace {

double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

Eigen::MatrixXd padded(const Eigen::MatrixXd& m, Eigen::Index size) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(size, size);
  out.topLeftCorner(m.rows(), m.cols()) = m;
  return out;
}

std::complex<double> total_shift(const WeightFunction& w) {
  return std::accumulate(w.translations().begin(), w.translations().end(),
                         std::complex<double>{});
}

}  // namespace

RealPolynomial2::RealPolynomial2(Eigen::MatrixXd coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.rows() == 0 || coefficients_.cols() == 0)
    coefficients_ = Eigen::MatrixXd::Zero(1, 1);
  const Eigen::Index n = std::max(coefficients_.rows(), coefficients_.cols());
  coefficients_ = padded(coefficients_, n);
}

RealPolynomial2 RealPolynomial2::real_part_of_monomial(std::complex<double> h, int k) {
  if (k < 0) throw ConfigError("real_part_of_monomial: negative degree");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k + 1, k + 1);
  // h z^k = Σ_j C(k,j) h i^j x^{k-j} y^j
  for (int j = 0; j <= k; ++j) {
    double re_h_ij = 0;
    switch (j % 4) {
      case 0: re_h_ij = h.real(); break;
      case 1: re_h_ij = -h.imag(); break;
      case 2: re_h_ij = -h.real(); break;
      case 3: re_h_ij = h.imag(); break;
    }
    c(k - j, j) = binomial(k, j) * re_h_ij;
  }
  return RealPolynomial2(c);
}

double RealPolynomial2::coefficient(int j, int k) const {
  if (j < 0 || k < 0 || j >= coefficients_.rows() || k >= coefficients_.cols()) return 0.0;
  return coefficients_(j, k);
}

int RealPolynomial2::degree() const {
  int deg = 0;
  for (Eigen::Index j = 0; j < coefficients_.rows(); ++j)
    for (Eigen::Index k = 0; k < coefficients_.cols(); ++k)
      if (coefficients_(j, k) != 0) deg = std::max(deg, int(j + k));
  return deg;
}

double RealPolynomial2::operator()(double x, double y) const {
  double acc = 0;
  for (Eigen::Index j = coefficients_.rows() - 1; j >= 0; --j) {
    double row = 0;
    for (Eigen::Index k = coefficients_.cols() - 1; k >= 0; --k) row = row * y + coefficients_(j, k);
    acc = acc * x + row;
  }
  return acc;
}

RealPolynomial2 RealPolynomial2::laplacian() const {
  const Eigen::Index n = coefficients_.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      double v = 0;
      if (j + 2 < n) v += double((j + 2) * (j + 1)) * coefficients_(j + 2, k);
      if (k + 2 < n) v += double((k + 2) * (k + 1)) * coefficients_(j, k + 2);
      out(j, k) = v;
    }
  return RealPolynomial2(out);
}

RealPolynomial2 RealPolynomial2::shifted(std::complex<double> s) const {
  const Eigen::Index n = coefficients_.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double c = coefficients_(j, k);
      if (c == 0) continue;
      for (int p = 0; p <= j; ++p)
        for (int q = 0; q <= k; ++q)
          out(p, q) += c * binomial(j, p) * std::pow(s.real(), j - p) * binomial(k, q) *
                       std::pow(s.imag(), k - q);
    }
  return RealPolynomial2(out);
}

bool RealPolynomial2::is_zero(double tol) const {
  return coefficients_.cwiseAbs().maxCoeff() <= tol;
}

RealPolynomial2 operator+(const RealPolynomial2& a, const RealPolynomial2& b) {
  const Eigen::Index n = std::max(a.coefficients_.rows(), b.coefficients_.rows());
  return RealPolynomial2(padded(a.coefficients_, n) + padded(b.coefficients_, n));
}

RealPolynomial2 operator-(const RealPolynomial2& a, const RealPolynomial2& b) {
  return a + (-1.0) * b;
}

RealPolynomial2 operator*(double s, const RealPolynomial2& p) {
  return RealPolynomial2(s * p.coefficients_);
}

ComplexPolynomial harmonic_conjugate_poly(const RealPolynomial2& u) {
  const Eigen::MatrixXd lap = u.laplacian().coefficients();
  const double scale = 1 + u.coefficients().cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < lap.rows(); ++j)
    for (Eigen::Index k = 0; k < lap.cols(); ++k)
      if (std::abs(lap(j, k)) > 1e-12 * scale) {
        std::ostringstream os;
        os << "harmonic_conjugate_poly: not harmonic, Laplacian has coefficient " << lap(j, k)
           << " on x^" << j << " y^" << k;
        throw UnsupportedCase(os.str());
      }

  const auto& c = u.coefficients();
  ComplexPolynomial p;
  p.coefficients.assign(std::size_t(c.rows() + c.cols() - 1), {0.0, 0.0});
  const std::complex<double> x_sub(0.5, 0.0), y_sub(0.0, -0.5);  // z/2, z/(2i)
  std::complex<double> x_pow(1.0, 0.0);
  for (Eigen::Index j = 0; j < c.rows(); ++j, x_pow *= x_sub) {
    std::complex<double> y_pow(1.0, 0.0);
    for (Eigen::Index k = 0; k < c.cols(); ++k, y_pow *= y_sub)
      if (c(j, k) != 0) p.coefficients[std::size_t(j + k)] += 2.0 * c(j, k) * x_pow * y_pow;
  }
  p.coefficients[0] -= c(0, 0);
  while (p.coefficients.size() > 1 && p.coefficients.back() == std::complex<double>{})
    p.coefficients.pop_back();
  return p;
}

WeightDecomposition decompose(const WeightFunction& w) {
  const auto& p = w.params();
  Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(3, 3);
  WeightDecomposition out;
  const auto radial = [&](double a) {
    quad(2, 0) = a;
    quad(0, 2) = a;
  };
  switch (w.family()) {
    case Family::gaussian:
      radial(1 / p.t);
      break;
    case Family::gaussian_harmonic:
      radial(p.a);
      quad(0, 0) = p.d;
      break;
    case Family::oscillatory:
      radial(p.a);
      out.has_residual = p.eps != 0;
      break;
    case Family::potential_defined:
      radial(p.a);
      out.has_residual = p.psi_amplitude != 0;
      break;
  }
  RealPolynomial2 poly(quad);
  if (w.family() == Family::gaussian_harmonic)
    poly = poly + RealPolynomial2::real_part_of_monomial(p.b, 2) +
           RealPolynomial2::real_part_of_monomial(p.c, 1);
  for (std::size_t k = 0; k < w.harmonic_terms().size(); ++k)
    poly = poly + RealPolynomial2::real_part_of_monomial(w.harmonic_terms()[k], int(k));
  const std::complex<double> shift = total_shift(w);
  out.polynomial = shift == std::complex<double>{} ? poly : poly.shifted(shift);
  return out;
}

std::optional<RealPolynomial2> polynomial_difference(const WeightFunction& a,
                                                     const WeightFunction& b) {
  const auto da = decompose(a);
  const auto db = decompose(b);
  if (da.has_residual || db.has_residual) {
    if (!(da.has_residual && db.has_residual)) return std::nullopt;
    if (a.family() != b.family()) return std::nullopt;
    const auto& pa = a.params();
    const auto& pb = b.params();
    const bool same = a.family() == Family::oscillatory
                          ? pa.eps == pb.eps
                          : pa.psi_amplitude == pb.psi_amplitude && pa.psi_radius == pb.psi_radius;
    if (!same || total_shift(a) != total_shift(b)) return std::nullopt;
  }
  return db.polynomial - da.polynomial;
}

CriterionReport log_laplacian_equal(const WeightDensity& a, const WeightDensity& b,
                                    std::span<const std::complex<double>> grid, double tol) {
  if (grid.empty()) throw ConfigError("log_laplacian_equal: empty grid");
  CriterionReport report;
  for (const auto& z : grid) {
    const double gap = std::abs(a.phi.laplacian(z) - b.phi.laplacian(z));
    report.max_gap = std::max(report.max_gap, gap);
    if (gap > tol && report.equal) {
      report.equal = false;
      report.first_mismatch = z;
    }
  }
  return report;
}

double EquivalenceMap::residual(std::span<const std::complex<double>> grid) const {
  double worst = 0;
  for (const auto& z : grid) {
    // |φ_eq|² β / α = exp(Re p − φ_b + φ_a)
    const double log_ratio = exponent_(z).real() - target_.phi.value(z) + source_.phi.value(z);
    worst = std::max(worst, std::abs(std::expm1(log_ratio)));
  }
  return worst;
}

EquivalenceMap build_equivalence_map(const WeightDensity& a, const WeightDensity& b) {
  const auto difference = polynomial_difference(a.phi, b.phi);
  if (!difference)
    throw UnsupportedCase(
        "build_equivalence_map: phi_b - phi_a is not a polynomial; only the polynomial "
        "harmonic case is constructed");
  return EquivalenceMap(harmonic_conjugate_poly(*difference), a, b);
}

EquivalenceMap map_to_segal_bargmann(const WeightDensity& a) {
  const auto d = decompose(a.phi);
  if (d.has_residual || d.polynomial.laplacian().degree() != 0)
    throw UnsupportedCase("map_to_segal_bargmann: Laplacian of phi is not constant");
  const double c = d.polynomial.laplacian().coefficient(0, 0);
  if (!(c > 0)) throw UnsupportedCase("map_to_segal_bargmann: need a positive constant Laplacian");
  return build_equivalence_map(a, WeightDensity{segal_bargmann_density(4 / c)});
}

UnitaryReport verify_unitary(const EquivalenceMap& m, std::span<const SampleFunction> samples,
                             const QuadratureRule<double>& rule, double tol) {
  UnitaryReport report;
  const Eigen::Index n = rule.size();
  VectorX<double> source(n), target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto z = rule.nodes(i);
    source(i) = rule.weights(i) * m.source()(z);
    target(i) = rule.weights(i) * std::norm(m(z)) * m.target()(z);
  }
  for (const auto& f : samples) {
    double lhs = 0, rhs = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f2 = std::norm(f(rule.nodes(i)));
      lhs += target(i) * f2;
      rhs += source(i) * f2;
    }
    if (!(rhs > 0)) throw NumericError("verify_unitary: sample has zero norm");
    const double ratio = lhs / rhs;
    report.norm_ratios.push_back(ratio);
    report.max_relative_error = std::max(report.max_relative_error, std::abs(ratio - 1));
  }
  report.pass = report.max_relative_error <= tol;
  return report;
}

InvarianceReport verify_kernel_invariance(const WeightDensity& a, const WeightDensity& b,
                                          std::span<const std::complex<double>> z_list, int N,
                                          const QuadratureRule<double>& rule, double tol) {
  const KernelEstimate<double> ka(a.phi, N, rule);
  const KernelEstimate<double> kb(b.phi, N, rule);
  InvarianceReport report;
  for (const auto& z : z_list) {
    InvariancePoint p;
    p.z = z;
    p.source_value = a(z) * ka.diag(z);
    p.target_value = b(z) * kb.diag(z);
    p.relative_gap = std::abs(p.source_value - p.target_value) / p.source_value;
    p.source_degree = ka.degree();
    p.target_degree = kb.degree();
    p.source_converged = ka.converged_degree(z);
    p.target_converged = kb.converged_degree(z);
    report.max_relative_gap = std::max(report.max_relative_gap, p.relative_gap);
    report.points.push_back(p);
  }
  report.pass = report.max_relative_gap <= tol;
  return report;
}

}  // namespace fockbound
