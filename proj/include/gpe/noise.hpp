#pragma once

#include <span>
#include <string>
#include <vector>

#include "gpe/dynamics.hpp"
#include "gpe/field.hpp"
#include "gpe/norms.hpp"
#include "gpe/random_field.hpp"

namespace gpe {

enum class NoiseKind { none, additive, multiplicative, half_derivative, vertical_transport };

const char* to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& s);

/// sigma_k(V), k = 0..m_W-1:
///   additive            alpha_k g_k
///   multiplicative      alpha_k V
///   half_derivative     alpha_k (1+k)^{-1} A^{1/2} V
///   vertical_transport  beta_k A_z V   (viscous only; A_z = H_z d_z keeps V even in z)
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  int m_W = 16;
  std::vector<double> alpha;
  std::vector<SpectralField> g;

  bool viscous_only() const { return kind == NoiseKind::vertical_transport; }
  /// sum alpha_k^2
  double amplitude_sq() const;
  /// Re-embeds the additive fields g_k into order N.
  NoiseModel embedded(int N) const;
};

/// alpha_k = c / sqrt(m_W); additive g_k are random analytic D0 fields of decay
/// rate tau_g normalized to ||g_k||_{tau_n, r} = 1.
NoiseModel make_noise_model(NoiseKind kind, int m_W, double c, int N, double r, double tau_g,
                            double tau_n, std::uint64_t seed);

std::vector<double> wiener_increments(int m_W, double dt, Rng& rng);

/// sigma_k(V), before projection.
SpectralField noise_map(const NoiseModel& model, const SpectralField& V, int k);

/// project_D0(P_N sum_k sigma_k(V) dW_k)
SpectralField apply_noise(const NoiseModel& model, const SpectralField& V, std::span<const double> dW,
                          Regime mode);

struct NoiseReport {
  std::string kind;
  int samples = 0;
  double growth_C = 0.0;     ///< sup HS / (1 + ||V||^2) in the model's declared norm
  double lipschitz_C = 0.0;  ///< sup HS(diff) / ||V - V'||^2 in the declared norm
  double delta_emp_sq = 0.0; ///< transport part: sup HS / ||d_z V||^2
  double growth_C_literal = 0.0;     ///< against 1 + ||V||^2_{tau, r+1/2}
  double lipschitz_C_literal = 0.0;  ///< against ||V - V'||^2_{tau, r+1/2}
  bool finite = true;
};

/// Hilbert-Schmidt norm squared sum_k ||sigma_k(V)||^2 in the active family.
double hilbert_schmidt_sq(const NoiseModel& model, const SpectralField& V, const GevreyParams& p,
                          Regime mode);

NoiseReport verify_noise_conditions(const NoiseModel& model, const GevreyParams& params, Regime mode,
                                    int samples, Rng& rng);

}  // namespace gpe
