#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpe/dynamics.hpp"
#include "gpe/noise.hpp"

namespace gpe {

enum class Formulation { V_form, U_form };

/// Everything the Galerkin SDE needs besides the state.
struct Problem {
  Regime mode = Regime::inviscid;
  double r = 3.0;
  PhysicsParams physics;
  CutoffSpec cutoff;
  RadiusSchedule schedule;
  NoiseModel noise;
  QMethod q_method = QMethod::pseudospectral;
};

/// Multiplier taking V to U at time t: e^{tau A} or e^{tau A_h} e^{gamma A_z}.
SpectralMultiplier radius_weight(const Problem& pb, double t);
SpectralField to_U(const SpectralField& V, const Problem& pb, double t);
SpectralField to_V(const SpectralField& U, const Problem& pb, double t);

/// One Euler-Maruyama step with exponential (ETD1) treatment of the diagonal
/// linear terms: diffusion in both forms, plus the radius factor in U_form.
/// X is V (V_form) or U (U_form).
SpectralField step(const SpectralField& X, double t, double dt, Formulation form, const Problem& pb,
                   std::span<const double> dW);

enum class StopDecision { continue_run, eta_hit };
StopDecision check_stopping(double active_norm_value, double rho);

struct StepRecord {
  double t = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
  double l2 = 0.0;
  double gevrey = 0.0;
  double seminorm = 0.0;
  double theta = 0.0;
  bool stopped = false;
  /// integrand weight of the energy budget: the squared dissipation seminorm
  double dissipation_sq = 0.0;
};

StepRecord make_record(const SpectralField& V, double t, const Problem& pb);

enum class StopReason { horizon_T, stopping_time_eta, overflow };
const char* to_string(StopReason r);

struct Trajectory {
  std::vector<StepRecord> records;
  StopReason stop_reason = StopReason::horizon_T;
  std::optional<double> eta;
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::vector<std::string> snapshots;
};

struct IntegratorOptions {
  double dt = 1e-3;
  double t_end = -1.0;  ///< negative means the schedule horizon
  bool stop_on_eta = true;
  Formulation form = Formulation::V_form;
};

/// Sequential single-trajectory driver; owns its Wiener stream.
class Integrator {
 public:
  Integrator(const Problem& pb, const SpectralField& V0, std::uint64_t noise_seed, IntegratorOptions opt);

  bool done() const { return done_; }
  /// Advances one step with increments from the internal stream.
  void advance();
  /// Advances one step with supplied increments.
  void advance(std::span<const double> dW);

  double time() const { return t_; }
  int step_index() const { return n_; }
  int total_steps() const { return n_total_; }
  double step_size() const;
  /// Current velocity V (converted from U in U_form).
  SpectralField velocity() const;
  const SpectralField& state() const { return X_; }
  const Trajectory& trajectory() const { return traj_; }
  Trajectory& trajectory() { return traj_; }

 private:
  void record();
  Problem pb_;
  IntegratorOptions opt_;
  Rng rng_;
  SpectralField X_;
  double t_ = 0.0;
  double t_end_ = 0.0;
  int n_ = 0;
  int n_total_ = 0;
  bool done_ = false;
  Trajectory traj_;
};

using StepObserver = std::function<void(const StepRecord&, const SpectralField& V, int step)>;

Trajectory simulate_problem(const Problem& pb, const SpectralField& V0, std::uint64_t noise_seed,
                            IntegratorOptions opt, const StepObserver& observer = {});

}  // namespace gpe
