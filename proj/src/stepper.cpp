#include "gpe/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "gpe/errors.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

namespace {

double phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z * (0.5 + z / 6.0);
  return std::expm1(z) / z;
}

}  // namespace

SpectralMultiplier radius_weight(const Problem& pb, double t) {
  if (pb.mode == Regime::inviscid) return SpectralMultiplier::exp_iso(pb.schedule.tau(t));
  return SpectralMultiplier::exp_aniso(pb.schedule.tau(t), pb.schedule.gamma(t));
}

SpectralField to_U(const SpectralField& V, const Problem& pb, double t) {
  return apply_multiplier(V, radius_weight(pb, t));
}

SpectralField to_V(const SpectralField& U, const Problem& pb, double t) {
  auto w = radius_weight(pb, t);
  w.tau = -w.tau;
  w.gamma = -w.gamma;
  return apply_multiplier(U, w);
}

SpectralField step(const SpectralField& X, double t, double dt, Formulation form, const Problem& pb,
                   std::span<const double> dW) {
  const double T = pb.schedule.T_max;
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be > 0");
  if (t + dt > T * (1.0 + 1e-12)) throw HorizonError("step: t + dt exceeds T_max");
  const auto& ms = X.modes();
  SpectralField out(X.mode_set());
  if (form == Formulation::V_form) {
    const double theta = cutoff_theta(active_norm(X, pb.schedule, t, pb.r), pb.cutoff);
    const SpectralField D = explicit_drift(X, theta, pb.physics, pb.q_method);
    const SpectralField S = apply_noise(pb.noise, X, dW, pb.mode);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double z = diffusion_rate(ms, i, pb.physics) * dt;
      const double e = std::exp(z), p = phi1(z);
      for (int c = 0; c < 2; ++c) out[i][c] = e * X[i][c] + (dt * p) * D[i][c] + e * S[i][c];
    }
  } else {
    const SpectralField V = to_V(X, pb, t);
    GevreyParams p0;
    p0.r = pb.r;
    p0.s = pb.r;
    const double theta = cutoff_theta(norm(X, p0, active_family(pb.mode), NormKind::full), pb.cutoff);
    const SpectralField D = explicit_drift(V, theta, pb.physics, pb.q_method);
    const SpectralField S = apply_noise(pb.noise, V, dW, pb.mode);
    const auto w = radius_weight(pb, t);
    const double dtau = pb.schedule.tau(t + dt) - pb.schedule.tau(t);
    const double dgam = pb.schedule.gamma(t + dt) - pb.schedule.gamma(t);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double wi = std::exp(log_multiplier(w, ms.k(i), ms.kh(i), ms.kz(i)));
      double z = diffusion_rate(ms, i, pb.physics) * dt;
      z += pb.mode == Regime::inviscid ? dtau * ms.k(i) : dtau * ms.kh(i) + dgam * ms.kz(i);
      const double e = std::exp(z), p = phi1(z);
      for (int c = 0; c < 2; ++c)
        out[i][c] = e * X[i][c] + (dt * p * wi) * D[i][c] + (e * wi) * S[i][c];
    }
  }
  if (!out.is_finite()) throw NumericalOverflow("step: non-finite coefficient");
  return out;
}

StopDecision check_stopping(double active_norm_value, double rho) {
  return active_norm_value >= 0.5 * rho ? StopDecision::eta_hit : StopDecision::continue_run;
}

StepRecord make_record(const SpectralField& V, double t, const Problem& pb) {
  StepRecord rec;
  const auto p = active_params(pb.schedule, t, pb.r);
  rec.t = t;
  rec.tau = p.tau;
  rec.gamma = p.gamma;
  rec.l2 = l2_norm(V);
  rec.gevrey = norm(V, p, active_family(pb.mode), NormKind::full);
  rec.seminorm = norm(V, p, active_family(pb.mode), NormKind::seminorm);
  rec.theta = cutoff_theta(rec.gevrey, pb.cutoff);
  const auto sq = [](double x) { return x * x; };
  if (pb.mode == Regime::inviscid) {
    rec.dissipation_sq =
        sq(multiplier_norm(V, {SpectralMultiplier::power(pb.r + 0.5), SpectralMultiplier::exp_iso(p.tau)}));
  } else {
    const auto e = SpectralMultiplier::exp_aniso(p.tau, p.gamma);
    const double dz = norm(apply_multiplier(V, SpectralMultiplier::power_z(1.0)), p,
                           NormFamily::anisotropic, NormKind::full);
    const double h = multiplier_norm(V, {SpectralMultiplier::power_h(0.5), SpectralMultiplier::power(pb.r), e});
    rec.dissipation_sq = pb.physics.nu_z * dz * dz + h * h;
  }
  return rec;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::horizon_T: return "horizon_T";
    case StopReason::stopping_time_eta: return "stopping_time_eta";
    case StopReason::overflow: return "overflow";
  }
  return "horizon_T";
}

Integrator::Integrator(const Problem& pb, const SpectralField& V0, std::uint64_t noise_seed,
                       IntegratorOptions opt)
    : pb_(pb), opt_(opt), rng_(noise_seed) {
  if (!(opt_.dt > 0.0)) throw InvalidArgument("Integrator: dt must be > 0");
  t_end_ = opt_.t_end < 0 ? pb.schedule.T_max : std::min(opt_.t_end, pb.schedule.T_max);
  n_total_ = static_cast<int>(std::ceil(t_end_ / opt_.dt * (1.0 - 1e-12)));
  if (n_total_ < 1) n_total_ = 1;
  X_ = opt_.form == Formulation::V_form ? V0 : to_U(V0, pb, 0.0);
  traj_.seed = noise_seed;
  traj_.dt = opt_.dt;
  record();
}

double Integrator::step_size() const {
  const double next = n_ + 1 >= n_total_ ? t_end_ : (n_ + 1) * opt_.dt;
  return next - t_;
}

SpectralField Integrator::velocity() const {
  return opt_.form == Formulation::V_form ? X_ : to_V(X_, pb_, t_);
}

void Integrator::record() {
  StepRecord rec = make_record(velocity(), t_, pb_);
  if (opt_.stop_on_eta && check_stopping(rec.gevrey, pb_.cutoff.rho) == StopDecision::eta_hit) {
    rec.stopped = true;
    traj_.eta = t_;
    traj_.stop_reason = StopReason::stopping_time_eta;
    done_ = true;
  }
  traj_.records.push_back(rec);
  if (!done_ && n_ >= n_total_) {
    traj_.stop_reason = StopReason::horizon_T;
    done_ = true;
  }
}

void Integrator::advance() {
  if (done_) return;
  const auto dW = wiener_increments(pb_.noise.m_W, step_size(), rng_);
  advance(dW);
}

void Integrator::advance(std::span<const double> dW) {
  if (done_) return;
  const double h = step_size();
  try {
    X_ = step(X_, t_, h, opt_.form, pb_, dW);
  } catch (const NumericalOverflow&) {
    traj_.stop_reason = StopReason::overflow;
    done_ = true;
    if (!traj_.records.empty()) traj_.records.back().stopped = true;
    return;
  }
  ++n_;
  t_ = n_ >= n_total_ ? t_end_ : n_ * opt_.dt;
  record();
}

Trajectory simulate_problem(const Problem& pb, const SpectralField& V0, std::uint64_t noise_seed,
                            IntegratorOptions opt, const StepObserver& observer) {
  Integrator it(pb, V0, noise_seed, opt);
  if (observer) observer(it.trajectory().records.back(), it.velocity(), 0);
  while (!it.done()) {
    it.advance();
    if (observer && it.trajectory().records.size() == static_cast<std::size_t>(it.step_index()) + 1)
      observer(it.trajectory().records.back(), it.velocity(), it.step_index());
  }
  return it.trajectory();
}

}  // namespace gpe
