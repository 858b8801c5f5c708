#include "fockbound/weights_json.hpp"

#include <set>

namespace fockbound {

namespace {

using nlohmann::json;

nlohmann::json complex_list(const std::vector<std::complex<double>>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back({v.real(), v.imag()});
  return out;
}

std::vector<std::complex<double>> read_complex_list(const json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string(key) + ": expected an array of [re, im]");
  std::vector<std::complex<double>> out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
      throw ConfigError(std::string(key) + ": entries must be [re, im]");
    out.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return out;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& params, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("params: missing '") + key + "'");
  }
  if (!params.at(key).is_number()) throw ConfigError(std::string("params: '") + key + "' is not a number");
  return params.at(key).get<double>();
}

}  // namespace

nlohmann::json weight_to_json(const WeightFunction& w) {
  const auto& p = w.params();
  json params;
  switch (w.family()) {
    case Family::gaussian:
      params = {{"t", p.t}};
      break;
    case Family::gaussian_harmonic:
      params = {{"a", p.a},           {"b_re", p.b.real()}, {"b_im", p.b.imag()},
                {"c_re", p.c.real()}, {"c_im", p.c.imag()}, {"d", p.d}};
      break;
    case Family::oscillatory:
      params = {{"a", p.a}, {"eps", p.eps}};
      break;
    case Family::potential_defined:
      params = {{"a", p.a}, {"psi_amplitude", p.psi_amplitude}, {"psi_radius", p.psi_radius}};
      break;
  }
  json out = {{"family", family_name(w.family())},
              {"params", params},
              {"laplacian_bounds", {w.laplacian_bounds().first, w.laplacian_bounds().second}}};
  if (!w.harmonic_terms().empty()) out["harmonic_terms"] = complex_list(w.harmonic_terms());
  if (!w.translations().empty()) out["translations"] = complex_list(w.translations());
  return out;
}

WeightFunction weight_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("weight: expected a JSON object");
  reject_unknown(j, {"family", "params", "laplacian_bounds", "harmonic_terms", "translations"},
                 "weight");
  if (!j.contains("family") || !j.at("family").is_string())
    throw ConfigError("weight: missing string 'family'");
  const Family family = family_from_name(j.at("family").get<std::string>());
  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ConfigError("weight: 'params' must be an object");

  std::optional<WeightFunction> w;
  switch (family) {
    case Family::gaussian:
      reject_unknown(params, {"t"}, "params");
      w = WeightFunction::gaussian(number(params, "t"));
      break;
    case Family::gaussian_harmonic:
      reject_unknown(params, {"a", "b_re", "b_im", "c_re", "c_im", "d"}, "params");
      w = WeightFunction::gaussian_harmonic(
          number(params, "a"), {number(params, "b_re", 0.0), number(params, "b_im", 0.0)},
          {number(params, "c_re", 0.0), number(params, "c_im", 0.0)}, number(params, "d", 0.0));
      break;
    case Family::oscillatory:
      reject_unknown(params, {"a", "eps"}, "params");
      w = WeightFunction::oscillatory(number(params, "a"), number(params, "eps"));
      break;
    case Family::potential_defined:
      reject_unknown(params, {"a", "psi_amplitude", "psi_radius"}, "params");
      w = WeightFunction::potential_defined(number(params, "a"), number(params, "psi_amplitude"),
                                            number(params, "psi_radius"));
      break;
  }
  if (j.contains("harmonic_terms"))
    w = w->with_harmonic_term(read_complex_list(j.at("harmonic_terms"), "harmonic_terms"));
  if (j.contains("laplacian_bounds")) {
    const auto& b = j.at("laplacian_bounds");
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      throw ConfigError("weight: 'laplacian_bounds' must be [m, M]");
    w = w->with_bounds(b[0].get<double>(), b[1].get<double>());
  }
  if (j.contains("translations"))
    for (const auto& s : read_complex_list(j.at("translations"), "translations"))
      w = translate_weight(*w, s);
  return *w;
}

}  // namespace fockbound
