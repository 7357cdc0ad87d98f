#pragma once

#include "gpe/field.hpp"
#include "gpe/norms.hpp"

namespace gpe {

enum class Regime { inviscid, viscous };

struct ForcingSpec {
  SpectralField field;  ///< empty means f = 0
  double tau0_f = 0.0;
  double gamma_star = 0.0;
};

struct PhysicsParams {
  double f0 = 0.0;
  double nu_z = 0.0;
  double nu_h = 0.0;
  ForcingSpec forcing;
};

struct CutoffSpec {
  double rho = 1.0;
};

/// theta_rho(x) = S((rho - |x|) / (rho/2)), S(u) = h(u) / (h(u) + h(1-u)), h(u) = e^{-1/u}.
double cutoff_theta(double x, const CutoffSpec& spec);

struct RadiusSchedule {
  Regime regime = Regime::inviscid;
  double tau0 = 1.0;
  double T_max = 1.0;
  double gamma_rate = 0.0;

  /// tau0 (1 - t / (2 T_max)), so tau(T_max) = tau0 / 2 exactly.
  double tau(double t) const { return tau0 * (1.0 - t / (2.0 * T_max)); }
  double gamma(double t) const { return gamma_rate * t; }
  double tau_rate() const { return tau0 / (2.0 * T_max); }
};

RadiusSchedule radius_schedule(Regime mode, double tau0, double rho, double C_cal, double p, double r,
                               double nu_z);

/// Gevrey parameters of the active norm at time t.
GevreyParams active_params(const RadiusSchedule& s, double t, double r);
NormFamily active_family(Regime mode);
double active_norm(const SpectralField& V, const RadiusSchedule& s, double t, double r);

enum class QMethod { direct, pseudospectral };

/// P_N (f.grad g + w(f) d_z g) with w(f) = -int_0^z div f.
SpectralField nonlinear_Q(const SpectralField& f, const SpectralField& g,
                          QMethod method = QMethod::pseudospectral);

/// V_perp = (-v, u)
SpectralField perp(const SpectralField& V);

/// project_D0(-theta Q(V,V) - f0 V_perp - f), the non-diffusive part of the drift.
SpectralField explicit_drift(const SpectralField& V, double theta, const PhysicsParams& physics,
                             QMethod method = QMethod::pseudospectral);

/// Full drift including nu_z d_zz V + nu_h Lap V.
SpectralField drift(const SpectralField& V, double t, Regime mode, const PhysicsParams& physics,
                    const CutoffSpec& cutoff, const RadiusSchedule& schedule, double r,
                    QMethod method = QMethod::pseudospectral);

/// -(nu_z |k3|^2 + nu_h |k'|^2) at mode i.
double diffusion_rate(const ModeSet& ms, std::size_t i, const PhysicsParams& physics);

}  // namespace gpe
