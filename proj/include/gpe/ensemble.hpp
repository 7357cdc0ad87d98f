#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gpe/config.hpp"
#include "gpe/stepper.hpp"
#include "gpe/verifier.hpp"

namespace gpe {

struct QuantileRow {
  int step = 0;
  double t = 0.0;
  int alive = 0;
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
};

struct TrajectoryStatus {
  int index = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  std::string stop_reason;
  std::optional<double> eta;
  int steps = 0;
};

struct EnsembleSummary {
  int ensemble_size = 0;
  std::vector<TrajectoryStatus> trajectories;
  /// Gevrey-norm quantiles over the trajectories alive at each step.
  std::vector<QuantileRow> quantiles;
  std::vector<double> etas;
  double fraction_eta = 0.0;
  double fraction_T = 0.0;
  int failed = 0;
  std::optional<EnergyBudgetReport> energy;
};

/// Linear-interpolation quantile of a sample (copied and sorted).
double quantile(std::vector<double> x, double q);

/// Runs trajectory i of cfg. When `dir` is set, streams traj_<i>.jsonl and
/// snap_<i>_<step>.bin into it.
Trajectory simulate(const SimConfig& cfg, int i, const std::optional<std::filesystem::path>& dir = {});

/// Aggregates finished trajectories (failed ones are skipped).
EnsembleSummary summarize(const SimConfig& cfg, const std::vector<Trajectory>& trajs,
                          const std::vector<TrajectoryStatus>& status);

/// Runs the ensemble on a bounded worker pool and writes config.json,
/// summary.json, summary.csv and the per-trajectory files into cfg.output_dir.
EnsembleSummary run_ensemble(const SimConfig& cfg);

/// %.17g, or "null" when not finite.
std::string json_number(double x);

}  // namespace gpe
