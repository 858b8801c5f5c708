#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fockbound/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<int> degree;
};

void apply(nlohmann::json& j, const Overrides& o) {
  if (o.seed) j["seed"] = *o.seed;
  if (o.resolution) j["resolution"] = *o.resolution;
  if (o.degree) j["N"] = *o.degree;
}

int execute(const std::string& subcommand, const Overrides& o) {
  using namespace fockbound;
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) {
      std::cerr << "config error: cannot open " << o.config << '\n';
      return exit_config_error;
    }
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return exit_config_error;
    }
    if (!j.is_object()) {
      std::cerr << "config error: top level must be an object\n";
      return exit_config_error;
    }
  }
  if (!j.contains("experiment")) j["experiment"] = subcommand;
  if (j["experiment"] != subcommand) {
    std::cerr << "config error: config is for '" << j["experiment"].dump() << "', not '" << subcommand
              << "'\n";
    return exit_config_error;
  }
  apply(j, o);
  if (j.contains("entries") && j["entries"].is_array())
    for (auto& e : j["entries"])
      if (e.is_object()) apply(e, o);
  if (o.out) j["output"] = *o.out;

  ExperimentConfig config;
  try {
    config = config_from_json(j);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
  const int status = run(config);
  if (status != exit_config_error) {
    std::ifstream summary(config.output / "summary.json");
    std::cout << summary.rdbuf();
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Bergman kernel bounds: experiments and certificates"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"kernel-diag", "truncated kernel diagonal on a grid"},
      {"verify-bound", "global pointwise bound certificate"},
      {"constants", "potential constants B, Phi(0) and the lemma constant"},
      {"equivalence", "holomorphic equivalence of two weights"},
      {"potential", "potential Phi and density psi on the unit disk"},
      {"mean-value", "mean value property over centered disks"},
      {"sweep", "run a list of same-type configs, one CSV row each"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--resolution", o.resolution, "quadrature resolution");
    sub->add_option("--degree", o.degree, "polynomial degree N");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fockbound::exit_config_error;
  }
  return execute(app.get_subcommands().front()->get_name(), o);
}
