#include "fockbound/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fockbound/bounds.hpp"
#include "fockbound/equivalence.hpp"
#include "fockbound/grids.hpp"
#include "fockbound/kernel.hpp"
#include "fockbound/potential.hpp"
#include "fockbound/weights_json.hpp"

namespace fockbound {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
using cd = std::complex<double>;

constexpr const char* kCsvSchema = "fockbound-csv v1";
constexpr const char* kSummarySchema = "fockbound-summary v1";
constexpr std::size_t kMaxGridPoints = 100000;

const std::vector<std::pair<ExperimentKind, std::string>> kNames{
    {ExperimentKind::kernel_diag, "kernel-diag"}, {ExperimentKind::verify_bound, "verify-bound"},
    {ExperimentKind::constants, "constants"},     {ExperimentKind::equivalence, "equivalence"},
    {ExperimentKind::potential, "potential"},     {ExperimentKind::mean_value, "mean-value"},
    {ExperimentKind::sweep, "sweep"}};

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

// JSON has no inf/nan; those are written as strings.
ojson num(double v) {
  if (!std::isfinite(v)) return fmt(v);
  return v;
}

ojson complex_json(cd z) { return ojson::array({num(z.real()), num(z.imag())}); }

std::string status_name(ExitStatus s) {
  switch (s) {
    case exit_ok: return "ok";
    case exit_config_error: return "config_error";
    case exit_numeric_failure: return "numeric_failure";
    case exit_certificate_failure: return "certificate_failure";
  }
  return "unknown";
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double read_number(const json& j, const char* key) {
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double v = j.at(key).get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string("'") + key + "' must be finite");
  return v;
}

int read_int(const json& j, const char* key, int lo, int hi) {
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  const auto v = j.at(key).get<long long>();
  if (v < lo || v > hi) {
    std::ostringstream os;
    os << "'" << key << "' = " << v << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(os.str());
  }
  return int(v);
}

cd read_complex(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(std::string("'") + key + "' must be [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

GridSpec grid_from_json(const json& j) {
  reject_unknown(j, {"kind", "center", "radius", "spacing", "rings", "angles", "count", "points"},
                 "grid");
  GridSpec g;
  const std::string kind = j.value("kind", "disk");
  if (kind == "disk") g.kind = GridSpec::Kind::disk;
  else if (kind == "polar") g.kind = GridSpec::Kind::polar;
  else if (kind == "random") g.kind = GridSpec::Kind::random;
  else if (kind == "points") g.kind = GridSpec::Kind::points;
  else throw ConfigError("grid: unknown kind '" + kind + "'");

  if (j.contains("center")) g.center = read_complex(j, "center");
  if (j.contains("radius")) g.radius = read_number(j, "radius");
  if (j.contains("spacing")) g.spacing = read_number(j, "spacing");
  if (!(g.radius > 0)) throw ConfigError("grid: radius must be positive");
  switch (g.kind) {
    case GridSpec::Kind::disk: {
      if (!(g.spacing > 0)) throw ConfigError("grid: spacing must be positive");
      const double estimate = std::pow(2 * g.radius / g.spacing + 1, 2);
      if (estimate > double(kMaxGridPoints)) throw ConfigError("grid: too many points");
      break;
    }
    case GridSpec::Kind::polar:
      if (!j.contains("rings") || !j.contains("angles"))
        throw ConfigError("grid: polar grid needs 'rings' and 'angles'");
      g.rings = read_int(j, "rings", 2, 1000);
      g.angles = read_int(j, "angles", 1, 1000);
      break;
    case GridSpec::Kind::random:
      if (!j.contains("count")) throw ConfigError("grid: random grid needs 'count'");
      g.count = read_int(j, "count", 1, int(kMaxGridPoints));
      break;
    case GridSpec::Kind::points: {
      if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty())
        throw ConfigError("grid: 'points' must be a nonempty array");
      for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw ConfigError("grid: points must be [re, im]");
        g.points.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      if (g.points.size() > kMaxGridPoints) throw ConfigError("grid: too many points");
      break;
    }
  }
  return g;
}

json grid_to_json(const GridSpec& g) {
  json j;
  switch (g.kind) {
    case GridSpec::Kind::disk:
      j = {{"kind", "disk"}, {"radius", g.radius}, {"spacing", g.spacing}};
      break;
    case GridSpec::Kind::polar:
      j = {{"kind", "polar"}, {"radius", g.radius}, {"rings", g.rings}, {"angles", g.angles}};
      break;
    case GridSpec::Kind::random:
      j = {{"kind", "random"}, {"radius", g.radius}, {"count", g.count}};
      break;
    case GridSpec::Kind::points: {
      j = {{"kind", "points"}, {"points", json::array()}};
      for (const auto& p : g.points) j["points"].push_back({p.real(), p.imag()});
      return j;
    }
  }
  j["center"] = {g.center.real(), g.center.imag()};
  return j;
}

std::vector<cd> make_grid(const GridSpec& g, std::mt19937_64& rng) {
  switch (g.kind) {
    case GridSpec::Kind::disk: return spaced_disk_grid(g.center, g.radius, g.spacing);
    case GridSpec::Kind::polar: return polar_grid(g.center, g.radius, g.rings, g.angles);
    case GridSpec::Kind::random: return random_disk_points(std::size_t(g.count), g.center, g.radius, rng);
    case GridSpec::Kind::points: return g.points;
  }
  return {};
}

struct Context {
  const ExperimentConfig& config;
  std::mt19937_64 rng;
  ExperimentResult result;

  explicit Context(const ExperimentConfig& c) : config(c), rng(c.seed) {}

  std::vector<cd> grid(const GridSpec& fallback) {
    const auto points = make_grid(config.grid.value_or(fallback), rng);
    if (points.empty()) throw ConfigError("grid is empty");
    return points;
  }
  double M() const { return config.M.value_or(config.weight.laplacian_bounds().second); }
  BoundOptions bound_options() const { return {config.b_resolution, config.b_grid}; }
  void fail(ExitStatus status, const std::string& message) {
    if (status > result.status) result.status = status;
    if (result.message.empty()) result.message = message;
  }
};

GridSpec disk_grid(double radius, double spacing) {
  GridSpec g;
  g.radius = radius;
  g.spacing = spacing;
  return g;
}

QuadratureRule<double> plane_rule(const WeightFunction& w, int N, int resolution, double extra = 0.0) {
  const double R = truncation_hint(w, N);
  if (!std::isfinite(R)) throw NumericError("weight is not integrable: no truncation radius");
  return truncated_plane_rule<double>(R + extra, resolution, 2 * resolution);
}

std::vector<SampleFunction> random_samples(Context& ctx) {
  std::uniform_int_distribution<int> degree(0, ctx.config.sample_degree);
  std::vector<SampleFunction> out;
  for (int i = 0; i < ctx.config.samples; ++i) {
    const int d = degree(ctx.rng);
    out.push_back(random_polynomial(d, ctx.rng));
  }
  return out;
}

void run_kernel_diag(Context& ctx) {
  const auto& c = ctx.config;
  const auto grid = ctx.grid(disk_grid(2.0, 0.1));
  const auto rule = plane_rule(c.weight, c.N, c.resolution);
  const KernelEstimate<double> k(c.weight, c.N, rule);

  Table t{"kernel_diag", {"z_re", "z_im", "N", "K_N", "K_N_exp_minus_phi", "condition_estimate"}, {}};
  double sup = 0;
  for (const auto& z : grid) {
    const double kn = k.diag(z);
    const double weighted = kn * std::exp(-c.weight.value(z));
    sup = std::max(sup, weighted);
    t.rows.push_back({fmt(z.real()), fmt(z.imag()), fmt(k.degree()), fmt(kn), fmt(weighted),
                      fmt(k.condition_estimate())});
  }
  ctx.result.tables.push_back(std::move(t));
  auto& s = ctx.result.summary;
  s["N_requested"] = c.N;
  s["N_used"] = k.degree();
  s["degraded"] = k.degraded();
  s["condition_estimate"] = num(k.condition_estimate());
  s["truncation_radius"] = num(rule.region.radius);
  s["points"] = grid.size();
  s["max_K_N_exp_minus_phi"] = num(sup);
}

void run_verify_bound(Context& ctx) {
  const auto& c = ctx.config;
  const auto grid = ctx.grid(disk_grid(2.0, 0.1));
  const auto rule = plane_rule(c.weight, c.N, c.resolution);
  const double M = ctx.M();
  const auto cert = global_certificate(c.weight, M, grid, c.N, rule, ctx.bound_options());

  Table t{"verify_bound", {"z_re", "z_im", "K_N_exp_minus_phi", "C", "margin"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.rows.push_back({fmt(grid[i].real()), fmt(grid[i].imag()), fmt(cert.values[i]),
                      fmt(cert.constant_C), fmt(cert.constant_C - cert.values[i])});
  ctx.result.tables.push_back(std::move(t));
  auto& s = ctx.result.summary;
  s["pass"] = cert.pass;
  s["tag"] = std::string(tag_name(cert.tag));
  s["constant_C"] = num(cert.constant_C);
  s["measured_sup"] = num(cert.measured_sup);
  s["margin"] = num(cert.margin);
  s["error_estimate"] = num(cert.error_estimate);
  s["B_used"] = num(cert.B_used);
  s["M"] = num(cert.M);
  s["N"] = cert.N;
  s["resolution"] = cert.resolution;
  s["notes"] = cert.notes;
  if (!cert.pass) ctx.fail(exit_certificate_failure, "certificate margin not above 3x error estimate");
}

PotentialField potential_for(Context& ctx, PotentialReport& report, const std::vector<cd>& grid) {
  const auto& c = ctx.config;
  PotentialField pf = make_psi(c.weight, ctx.M());
  pf.resolution = c.resolution;
  pf.B_used = certified_B(ctx.bound_options()).value;
  report = verify_potential_bounds(pf, grid, c.tolerance);
  return pf;
}

void run_constants(Context& ctx) {
  const auto grid = ctx.grid(disk_grid(0.99, 0.2));
  PotentialReport report;
  const auto pf = potential_for(ctx, report, grid);
  const auto& B = certified_B(ctx.bound_options());

  Table t{"constants",
          {"M", "B_used", "bracket_lo", "bracket_hi", "B_grid_sup", "B_margin", "phi_at_zero",
           "minus_M_over_4", "max_phi", "B_times_M", "pass"},
          {}};
  t.rows.push_back({fmt(pf.M), fmt(B.value), fmt(B.bracket_lo), fmt(B.bracket_hi),
                    fmt(B.grid_sup), fmt(B.margin), fmt(report.phi_at_zero), fmt(-pf.M / 4),
                    fmt(report.max_phi), fmt(B.value * pf.M), fmt(report.pass)});
  ctx.result.tables.push_back(std::move(t));
  auto& s = ctx.result.summary;
  s["pass"] = report.pass;
  s["M"] = num(pf.M);
  s["B_used"] = num(B.value);
  s["B_bracket"] = {num(B.bracket_lo), num(B.bracket_hi)};
  s["B_quadrature_error"] = num(B.quadrature_error);
  s["phi_at_zero"] = num(report.phi_at_zero);
  s["max_phi"] = num(report.max_phi);
  s["notes"] = report.notes;
  if (!report.pass) ctx.fail(exit_certificate_failure, "potential bounds not satisfied");
}

void run_potential(Context& ctx) {
  const auto grid = ctx.grid(disk_grid(0.99, 0.1));
  PotentialReport report;
  const auto pf = potential_for(ctx, report, grid);

  Table t{"potential", {"z_re", "z_im", "Phi", "psi"}, {}};
  for (const auto& z : grid)
    t.rows.push_back({fmt(z.real()), fmt(z.imag()), fmt(pf.phi(z)), fmt(pf.psi(z))});
  ctx.result.tables.push_back(std::move(t));
  auto& s = ctx.result.summary;
  s["pass"] = report.pass;
  s["upper_ok"] = report.upper_ok;
  s["lower_ok"] = report.lower_ok;
  s["poisson_ok"] = report.poisson_ok;
  s["M"] = num(pf.M);
  s["B_used"] = num(pf.B_used);
  s["phi_at_zero"] = num(report.phi_at_zero);
  s["max_phi"] = num(report.max_phi);
  s["max_poisson_residual"] = num(report.max_poisson_residual);
  s["poisson_tol"] = num(report.poisson_tol);
  s["notes"] = report.notes;
  if (!report.pass) ctx.fail(exit_certificate_failure, "potential checks failed");
}

void run_equivalence(Context& ctx) {
  const auto& c = ctx.config;
  if (!c.weight_b) throw ConfigError("equivalence needs 'weight_b'");
  const WeightDensity a{c.weight}, b{*c.weight_b};
  const auto grid = ctx.grid(disk_grid(2.0, 0.1));
  const auto criterion = log_laplacian_equal(a, b, grid, c.tolerance);
  auto& s = ctx.result.summary;
  s["equivalent"] = criterion.equal;
  s["criterion_max_gap"] = num(criterion.max_gap);
  Table checks{"equivalence", {"check", "value", "tolerance", "pass"}, {}};
  checks.rows.push_back({"laplacian_gap", fmt(criterion.max_gap), fmt(c.tolerance), fmt(criterion.equal)});
  if (!criterion.equal) {
    s["first_mismatch"] = complex_json(*criterion.first_mismatch);
    s["pass"] = true;
    ctx.result.tables.push_back(std::move(checks));
    return;
  }

  const auto map = build_equivalence_map(a, b);
  Table poly{"equivalence_poly", {"k", "p_re", "p_im"}, {}};
  for (std::size_t k = 0; k < map.exponent().coefficients.size(); ++k) {
    const auto& v = map.exponent().coefficients[k];
    poly.rows.push_back({std::to_string(k), fmt(v.real()), fmt(v.imag())});
  }

  constexpr double kResidualTol = 1e-10, kUnitaryTol = 1e-5, kInvarianceTol = 1e-4;
  const auto residual_points = random_disk_points(100, {}, 3.0, ctx.rng);
  const double residual = map.residual(residual_points);
  checks.rows.push_back({"grid_residual", fmt(residual), fmt(kResidualTol), fmt(residual <= kResidualTol)});

  const auto samples = random_samples(ctx);
  const double R = std::max(truncation_hint(a.phi, kDefaultMaxDegree), truncation_hint(b.phi, kDefaultMaxDegree));
  if (!std::isfinite(R)) throw NumericError("weight is not integrable: no truncation radius");
  const auto rule = truncated_plane_rule<double>(R + 2.0, c.resolution, 2 * c.resolution);
  const auto unitary = verify_unitary(map, samples, rule, kUnitaryTol);
  checks.rows.push_back({"unitary_max_error", fmt(unitary.max_relative_error), fmt(kUnitaryTol), fmt(unitary.pass)});

  const std::vector<cd> zs{{0, 0}, {1, 0}, {0, 1}};
  const auto invariance = verify_kernel_invariance(a, b, zs, c.N, rule, kInvarianceTol);
  checks.rows.push_back({"kernel_invariance_gap", fmt(invariance.max_relative_gap), fmt(kInvarianceTol),
                         fmt(invariance.pass)});

  const bool pass = residual <= kResidualTol && unitary.pass && invariance.pass;
  s["pass"] = pass;
  ojson p = ojson::array();
  for (const auto& v : map.exponent().coefficients) p.push_back(complex_json(v));
  s["p"] = p;
  s["grid_residual"] = num(residual);
  s["unitary_max_error"] = num(unitary.max_relative_error);
  s["kernel_invariance_gap"] = num(invariance.max_relative_gap);
  ojson degrees = ojson::array();
  for (const auto& pt : invariance.points)
    degrees.push_back({{"z", complex_json(pt.z)},
                       {"source_converged", pt.source_converged},
                       {"target_converged", pt.target_converged}});
  s["kernel_invariance_points"] = degrees;
  ctx.result.tables.push_back(std::move(checks));
  ctx.result.tables.push_back(std::move(poly));
  if (!pass) ctx.fail(exit_certificate_failure, "equivalence checks failed");
}

void run_mean_value(Context& ctx) {
  const auto& c = ctx.config;
  std::vector<std::pair<std::string, SampleFunction>> functions{
      {"1", monomial(0)}, {"w", monomial(1)}, {"w^2", monomial(2)}, {"exp(w)", SampleFunction{{1.0}, {1.0, 0.0}}}};
  const auto samples = random_samples(ctx);
  for (std::size_t i = 0; i < samples.size(); ++i)
    functions.emplace_back("random_" + std::to_string(i), samples[i]);

  Table t{"mean_value", {"h", "s", "mean_re", "mean_im", "h0_re", "h0_im", "error", "pass"}, {}};
  bool pass = true;
  double worst = 0;
  for (const double s : c.s_values) {
    const auto rule = disk_rule<double>({}, s, c.resolution, 2 * c.resolution);
    for (const auto& [name, h] : functions) {
      const auto r = mean_value_check(h, s, rule, c.tolerance);
      pass = pass && r.pass;
      worst = std::max(worst, r.error);
      t.rows.push_back({name, fmt(s), fmt(r.mean.real()), fmt(r.mean.imag()), fmt(r.value_at_zero.real()),
                        fmt(r.value_at_zero.imag()), fmt(r.error), fmt(r.pass)});
    }
  }
  ctx.result.tables.push_back(std::move(t));
  ctx.result.summary["pass"] = pass;
  ctx.result.summary["max_error"] = num(worst);
  if (!pass) ctx.fail(exit_certificate_failure, "mean value error above tolerance");
}

const std::vector<std::string>& sweep_columns(ExperimentKind kind) {
  static const std::map<ExperimentKind, std::vector<std::string>> columns{
      {ExperimentKind::kernel_diag, {"N_used", "condition_estimate", "max_K_N_exp_minus_phi"}},
      {ExperimentKind::verify_bound, {"pass", "constant_C", "measured_sup", "margin", "error_estimate", "B_used", "M"}},
      {ExperimentKind::constants, {"pass", "M", "B_used", "phi_at_zero", "max_phi"}},
      {ExperimentKind::potential, {"pass", "M", "phi_at_zero", "max_phi", "max_poisson_residual"}},
      {ExperimentKind::equivalence, {"equivalent", "pass", "criterion_max_gap"}},
      {ExperimentKind::mean_value, {"pass", "max_error"}}};
  return columns.at(kind);
}

std::string cell(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return fmt(v.get<bool>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

ExperimentResult run_single(const ExperimentConfig& config);

void run_sweep(Context& ctx) {
  const auto& entries = ctx.config.entries;
  Table t{"sweep", {"index", "label", "status", "message"}, {}};
  if (!entries.empty()) {
    for (const auto& col : sweep_columns(entries.front().experiment)) t.columns.push_back(col);
    ctx.result.summary["entry_experiment"] = experiment_name(entries.front().experiment);
  }
  ojson statuses = ojson::array();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ExperimentResult r;
    try {
      r = run_single(entries[i]);
    } catch (const ConfigError& e) {
      r.status = exit_config_error;
      r.message = e.what();
    }
    std::vector<std::string> row{std::to_string(i), entries[i].label, status_name(r.status), r.message};
    for (const auto& col : sweep_columns(entries[i].experiment))
      row.push_back(r.summary.contains(col) ? cell(r.summary.at(col)) : "");
    t.rows.push_back(std::move(row));
    statuses.push_back(status_name(r.status));
    if (r.status != exit_ok) ctx.fail(r.status, "entry " + std::to_string(i) + ": " + r.message);
  }
  ctx.result.summary["entries"] = entries.size();
  ctx.result.summary["entry_status"] = statuses;
  ctx.result.tables.push_back(std::move(t));
}

ExperimentResult run_single(const ExperimentConfig& config) {
  Context ctx(config);
  auto& s = ctx.result.summary;
  s["schema"] = kSummarySchema;
  s["experiment"] = experiment_name(config.experiment);
  s["label"] = config.label;
  s["seed"] = config.seed;
  s["config"] = ojson::parse(config_to_json(config).dump());
  try {
    switch (config.experiment) {
      case ExperimentKind::kernel_diag: run_kernel_diag(ctx); break;
      case ExperimentKind::verify_bound: run_verify_bound(ctx); break;
      case ExperimentKind::constants: run_constants(ctx); break;
      case ExperimentKind::potential: run_potential(ctx); break;
      case ExperimentKind::equivalence: run_equivalence(ctx); break;
      case ExperimentKind::mean_value: run_mean_value(ctx); break;
      case ExperimentKind::sweep: run_sweep(ctx); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    ctx.result.tables.clear();
    ctx.fail(exit_numeric_failure, e.what());
  }
  s["status"] = status_name(ctx.result.status);
  s["exit_status"] = int(ctx.result.status);
  s["message"] = ctx.result.message;
  return std::move(ctx.result);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  throw ConfigError("unknown experiment kind");
}

ExperimentKind experiment_from_name(const std::string& name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"experiment", "weight", "weight_b", "N", "resolution", "M", "grid", "tolerance",
                  "seed", "samples", "sample_degree", "s_values", "b_resolution", "b_grid",
                  "label", "output", "entries"},
                 "config");
  ExperimentConfig c;
  if (!j.contains("experiment") || !j.at("experiment").is_string())
    throw ConfigError("config: 'experiment' is required");
  c.experiment = experiment_from_name(j.at("experiment").get<std::string>());
  if (j.contains("weight")) c.weight = weight_from_json(j.at("weight"));
  if (j.contains("weight_b")) c.weight_b = weight_from_json(j.at("weight_b"));
  if (j.contains("N")) c.N = read_int(j, "N", 0, kMaxDegree);
  if (j.contains("resolution")) c.resolution = read_int(j, "resolution", 4, kMaxResolution);
  if (j.contains("M")) {
    c.M = read_number(j, "M");
    if (*c.M < 0) throw ConfigError("'M' must be nonnegative");
  }
  if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
  if (j.contains("tolerance")) {
    c.tolerance = read_number(j, "tolerance");
    if (!(c.tolerance > 0)) throw ConfigError("'tolerance' must be positive");
  }
  if (j.contains("seed")) {
    const auto& seed = j.at("seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<long long>() < 0))
      throw ConfigError("'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("samples")) c.samples = read_int(j, "samples", 0, 10000);
  if (j.contains("sample_degree")) c.sample_degree = read_int(j, "sample_degree", 0, kMaxDegree);
  if (j.contains("s_values")) {
    const auto& v = j.at("s_values");
    if (!v.is_array() || v.empty()) throw ConfigError("'s_values' must be a nonempty array");
    c.s_values.clear();
    for (const auto& s : v) {
      if (!s.is_number() || !(s.get<double>() > 0 && s.get<double>() < 1))
        throw ConfigError("'s_values' entries must lie in (0, 1)");
      c.s_values.push_back(s.get<double>());
    }
  }
  if (j.contains("b_resolution")) c.b_resolution = read_int(j, "b_resolution", 4, kMaxResolution);
  if (j.contains("b_grid")) c.b_grid = read_int(j, "b_grid", 9, 1025);
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw ConfigError("'label' must be a string");
    c.label = j.at("label").get<std::string>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("'output' must be a string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("entries")) {
    if (c.experiment != ExperimentKind::sweep) throw ConfigError("'entries' is only valid for sweep");
    if (!j.at("entries").is_array()) throw ConfigError("'entries' must be an array");
    for (const auto& e : j.at("entries")) {
      auto entry = config_from_json(e);
      if (entry.experiment == ExperimentKind::sweep) throw ConfigError("sweep entries cannot be sweeps");
      if (!c.entries.empty() && entry.experiment != c.entries.front().experiment)
        throw ConfigError("sweep entries mix experiment types");
      c.entries.push_back(std::move(entry));
    }
  }
  if (c.experiment == ExperimentKind::equivalence && !c.weight_b)
    throw ConfigError("equivalence needs 'weight_b'");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"experiment", experiment_name(c.experiment)},
         {"weight", weight_to_json(c.weight)},
         {"N", c.N},
         {"resolution", c.resolution},
         {"tolerance", c.tolerance},
         {"seed", c.seed},
         {"samples", c.samples},
         {"sample_degree", c.sample_degree},
         {"s_values", c.s_values},
         {"b_resolution", c.b_resolution},
         {"b_grid", c.b_grid},
         {"label", c.label},
         {"output", c.output.string()}};
  if (c.weight_b) j["weight_b"] = weight_to_json(*c.weight_b);
  if (c.M) j["M"] = *c.M;
  if (c.grid) j["grid"] = grid_to_json(*c.grid);
  if (c.experiment == ExperimentKind::sweep) {
    j["entries"] = json::array();
    for (const auto& e : c.entries) j["entries"].push_back(config_to_json(e));
  }
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config) { return run_single(config); }

std::string render_csv(const Table& table) {
  std::ostringstream os;
  os << "# " << kCsvSchema << ' ' << table.name << '\n';
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const auto& v = cells[i];
      if (v.find_first_of(",\"\n") == std::string::npos) {
        os << v;
      } else {
        os << '"';
        for (char ch : v) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      }
    }
    os << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
  return os.str();
}

void write_result(const ExperimentResult& result, const std::filesystem::path& output) {
  std::filesystem::create_directories(output);
  const auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + path.string());
  };
  for (const auto& t : result.tables) write(output / (t.name + ".csv"), render_csv(t));
  auto summary = result.summary;
  summary["generated_at"] = utc_timestamp();
  write(output / "summary.json", summary.dump(2) + "\n");
}

int run(const ExperimentConfig& config) {
  ExperimentResult result;
  try {
    result = run_experiment(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
  write_result(result, config.output);
  if (result.status != exit_ok) std::cerr << status_name(result.status) << ": " << result.message << '\n';
  return result.status;
}

}  // namespace fockbound
