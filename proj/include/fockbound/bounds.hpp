#pragma once

// Pointwise bounds |f(z)|² <= C e^{φ(z)} ‖f‖², certified on grids via the
// kernel diagonal, which is the smallest admissible constant at each point.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fockbound/kernel.hpp"
#include "fockbound/potential.hpp"
#include "fockbound/quadrature.hpp"
#include "fockbound/weights.hpp"

namespace fockbound {

enum class BoundKind { constant_case, local_lemma, global };

std::string_view tag_name(BoundKind tag);

struct BoundOptions {
  int b_resolution = 128;  // compute_B quadrature resolution
  int b_grid = 17;         // compute_B ω grid size
};

/// compute_B(b_resolution, b_grid), memoized per option pair.
const BConstant& certified_B(const BoundOptions& options = {});

/// e^{(B + 1/4)M}/π
double lemma_constant(double B, double M);

struct BoundCertificate {
  BoundKind tag = BoundKind::global;
  double constant_C = 0.0;
  std::vector<std::complex<double>> grid;
  std::vector<double> values;  // K_N(z,z)e^{-φ(z)} per grid point, or per-sample ratios
  double measured_sup = 0.0;
  double measured_min = 0.0;
  double margin = 0.0;  // constant_C − measured_sup
  double error_estimate = 0.0;
  bool pass = false;

  int N = 0;
  int resolution = 0;
  double B_used = 0.0;
  double M = 0.0;
  /// e^{BM − Φ(0)}/π; depends on the weight, not only on M.
  std::optional<double> tighter_C;
  std::vector<std::string> notes;
};

/// Δφ ≡ c > 0: every K_N(z,z)e^{-φ(z)} should equal c/4π. Passes when all
/// grid values are within tol + 3·error of c/4π. A nonconstant Laplacian on
/// D(0,2) ∪ grid throws ValidationFailure.
BoundCertificate constant_case_certificate(const WeightFunction& w,
                                           std::span<const std::complex<double>> grid, int N,
                                           const QuadratureRule<double>& rule, double tol = 1e-4);

struct MeanValueReport {
  bool pass = false;
  std::complex<double> mean{0.0, 0.0};
  std::complex<double> value_at_zero{0.0, 0.0};
  double error = 0.0;
};

/// (1/πs²)∫_{D(0,s)} h against h(0). `rule` must cover exactly D(0, s).
MeanValueReport mean_value_check(const SampleFunction& h, double s,
                                 const QuadratureRule<double>& rule, double tol);

/// |f(0)|² <= C e^{φ(0)} ∫_{D(0,1)} |f|² e^{-φ} for each sample, by quadrature
/// on D(0,1). Needs 0 <= Δφ <= M on D(0,2) (ValidationFailure otherwise).
BoundCertificate local_bound_certificate(const WeightFunction& w, double M,
                                         std::span<const SampleFunction> samples, int resolution,
                                         const BoundOptions& options = {});

/// sup over the grid of K_N(z,z)e^{-φ(z)} against C = e^{(B+1/4)M}/π. The
/// error estimate is the largest change when the rule is halved.
BoundCertificate global_certificate(const WeightFunction& w, double M,
                                    std::span<const std::complex<double>> grid, int N,
                                    const QuadratureRule<double>& rule,
                                    const BoundOptions& options = {});

struct EquivarianceReport {
  double translated_at_zero = 0.0;  // K_N e^{-φ} for translate_weight(w, z0) at 0
  double original_at_z0 = 0.0;      // K_N e^{-φ} for w at z0, rule recentered at z0
  double relative_gap = 0.0;
};

/// `rule` is taken as centered at 0 for the translated weight.
EquivarianceReport translation_equivariance(const WeightFunction& w, std::complex<double> z0,
                                            int N, const QuadratureRule<double>& rule);

struct ChainReport {
  bool pass = false;
  double value = 0.0;       // |f(z)|²
  double local_bound = 0.0;  // C e^{φ(z)} ∫_{D(z,1)} |f|² e^{-φ}
  double global_bound = 0.0; // C e^{φ(z)} ‖f‖² on the truncated plane
  double constant_C = 0.0;
};

/// The translation argument at z, step by step, with 1e-9 relative slack per
/// step. M defaults to the declared upper Laplacian bound of w.
ChainReport translated_pointwise_check(const WeightFunction& w, const SampleFunction& f,
                                       std::complex<double> z, int resolution,
                                       std::optional<double> M = std::nullopt,
                                       const BoundOptions& options = {});

}  // namespace fockbound
