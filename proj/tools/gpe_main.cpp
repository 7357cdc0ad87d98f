#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>

#include "gpe/config.hpp"
#include "gpe/ensemble.hpp"
#include "gpe/errors.hpp"
#include "gpe/suite.hpp"
#include "gpe/verifier.hpp"

namespace {

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gevrey-class stochastic primitive equations: Galerkin ensembles and estimate checks"};
  app.require_subcommand(1);

  std::string config, out, suite, levels = "4,6,8";
  std::uint64_t seed = 0;
  double eps = 1e-6;
  std::string fault;

  auto* sim = app.add_subcommand("simulate", "run an ensemble");
  sim->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = sim->add_option("--seed", seed, "master seed (overrides the config)");
  auto* out_opt = sim->add_option("--out", out, "output directory (overrides the config)");

  auto* ver = app.add_subcommand("verify", "run the verifier suite");
  ver->add_option("--suite", suite, "suite file")->required()->check(CLI::ExistingFile);
  auto* vout = ver->add_option("--out", out, "report directory (overrides the suite)");
  auto* vfault = ver->add_option("--inject-fault", fault, "none | cutoff");

  auto* conv = app.add_subcommand("convergence", "Galerkin self-convergence table");
  conv->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  conv->add_option("--levels", levels, "comma-separated orders");

  auto* uni = app.add_subcommand("uniqueness", "shared-noise uniqueness experiment");
  uni->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  uni->add_option("--perturb", eps, "perturbation of the ic.mode coefficient");
  auto* useed = uni->add_option("--seed", seed, "trajectory seed (default: trajectory 0 of the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      std::map<std::string, std::string> over;
      if (seed_opt->count()) over["seed"] = std::to_string(seed);
      if (out_opt->count()) over["output_dir"] = out;
      gpe::SimConfig cfg = gpe::parse_config(config);
      if (!over.empty()) cfg = gpe::with_overrides(cfg, over);
      const auto s = gpe::run_ensemble(cfg);
      std::printf("%d trajectories, %d failed, stopped by eta: %.17g, reached T: %.17g\n", s.ensemble_size,
                  s.failed, s.fraction_eta, s.fraction_T);
      return s.failed > 0 ? 1 : 0;
    }
    if (ver->parsed()) {
      gpe::SuiteOptions o = gpe::parse_suite(suite);
      if (vout->count()) o.output_dir = out;
      if (vfault->count()) o.inject_fault = fault;
      const int rc = gpe::run_verifier_suite(o);
      std::printf("report written to %s; %s\n", o.output_dir.c_str(), rc == 0 ? "all hard checks pass" : "HARD CHECK FAILED");
      return rc;
    }
    if (conv->parsed()) {
      const gpe::SimConfig cfg = gpe::parse_config(config);
      std::printf("N,sup_diff,steps\n");
      for (const auto& r : gpe::galerkin_convergence(cfg, parse_levels(levels)))
        std::printf("%d,%s,%d\n", r.N, gpe::json_number(r.sup_diff).c_str(), r.steps);
      return 0;
    }
    if (uni->parsed()) {
      const gpe::SimConfig cfg = gpe::parse_config(config);
      const std::uint64_t s = useed->count() ? seed : gpe::trajectory_seed(cfg, 0);
      const auto r = gpe::uniqueness_experiment(cfg, s, eps);
      nlohmann::ordered_json j;
      j["sup_diff_equal_ic"] = r.sup_diff_equal_ic;
      j["sup_diff_distinct_ic"] = r.sup_diff_distinct_ic;
      j["eta_pair"] = {r.eta_pair.first, r.eta_pair.second};
      j["growth_rate"] = r.growth_rate;
      j["fit_r2"] = r.fit_r2;
      j["eps"] = r.eps;
      j["steps"] = r.steps;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const gpe::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
