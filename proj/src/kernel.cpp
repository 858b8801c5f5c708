#include "fockbound/kernel.hpp"

namespace fockbound {

SampleFunction random_polynomial(int degree, std::mt19937_64& rng) {
  if (degree < 0) throw ConfigError("random_polynomial: degree must be nonnegative");
  std::normal_distribution<double> normal(0.0, 1.0);
  SampleFunction f;
  f.coefficients.reserve(std::size_t(degree) + 1);
  for (int k = 0; k <= degree; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    f.coefficients.emplace_back(re, im);
  }
  return f;
}

SampleFunction truncated_exponential(std::complex<double> rate, int degree) {
  SampleFunction f;
  std::complex<double> term(1.0, 0.0);
  for (int k = 0; k <= degree; ++k) {
    f.coefficients.push_back(term);
    term *= rate / double(k + 1);
  }
  return f;
}

SampleFunction monomial(int k) {
  SampleFunction f;
  f.coefficients.assign(std::size_t(k) + 1, {0.0, 0.0});
  f.coefficients.back() = 1.0;
  return f;
}

template class KernelEstimate<double>;

}  // namespace fockbound
