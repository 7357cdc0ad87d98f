#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gpe/config.hpp"

namespace gpe {

struct SuiteOptions {
  std::string output_dir = "gpe_verify";
  std::vector<std::string> checks;  ///< empty: all
  int samples = 500;
  std::vector<int> orders{3, 4};
  double r = 2.6;
  double tau = 0.1;
  double gamma = 0.05;
  int sandwich_samples = 1000;
  int poincare_samples = 1000;
  int orthogonality_samples = 200;
  int q_samples = 100;
  int uniqueness_seeds = 50;
  int consistency_configs = 20;
  std::vector<int> convergence_levels{3, 4, 6};
  std::uint64_t seed = 1;
  int workers = 0;
  std::string inject_fault = "none";  ///< none | cutoff
};

SuiteOptions parse_suite_text(const std::string& text);
SuiteOptions parse_suite(const std::filesystem::path& path);

struct SuiteRow {
  std::string name;
  int N = 0;
  int samples = 0;
  double worst_ratio = 0.0;
  bool pass = false;
  bool hard = false;
  std::string detail;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  bool hard_failure = false;
};

SuiteResult run_suite(const SuiteOptions& opt);

/// Runs the suite, writes report.json and report.csv into opt.output_dir and
/// returns the exit status (nonzero iff a hard check failed).
int run_verifier_suite(const SuiteOptions& opt);

/// Small validated configuration used by the suite and the tests: N, noise kind,
/// Coriolis parameter and seed vary; dt is set to T / steps.
SimConfig standard_config(Regime mode, NoiseKind noise, int N, std::uint64_t seed, double f0 = 0.0,
                          int steps = 100, double noise_amplitude = 0.5);

/// The formulation-consistency family: configuration k of `count`, at order N.
SimConfig consistency_config(int k, int N);

}  // namespace gpe
