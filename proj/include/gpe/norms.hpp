#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "gpe/field.hpp"

namespace gpe {

inline constexpr double kMaxExponent = 700.0;

enum class MultKind { A, Ah, Az, ExpA, ExpAhAz };

/// Diagonal Fourier multiplier: |k|^a, |k'|^a, |k3|^a, e^{tau|k|} or e^{tau|k'| + gamma|k3|}.
struct SpectralMultiplier {
  MultKind kind = MultKind::A;
  double a = 0.0;
  double tau = 0.0;
  double gamma = 0.0;

  static SpectralMultiplier power(double a) { return {MultKind::A, a, 0.0, 0.0}; }
  static SpectralMultiplier power_h(double a) { return {MultKind::Ah, a, 0.0, 0.0}; }
  static SpectralMultiplier power_z(double a) { return {MultKind::Az, a, 0.0, 0.0}; }
  static SpectralMultiplier exp_iso(double tau) { return {MultKind::ExpA, 0.0, tau, 0.0}; }
  static SpectralMultiplier exp_aniso(double tau, double gamma) {
    return {MultKind::ExpAhAz, 0.0, tau, gamma};
  }
};

/// Natural log of the multiplier at one mode (-inf where it vanishes).
double log_multiplier(const SpectralMultiplier& m, double k, double kh, double kz);

/// Throws RadiusTooLarge when an exponential weight exceeds e^700 on the mode set.
void check_radius(const ModeSet& ms, const SpectralMultiplier& m);

SpectralField apply_multiplier(const SpectralField& f, const SpectralMultiplier& m);
SpectralField apply_multipliers(const SpectralField& f, std::span<const SpectralMultiplier> chain);
SpectralField apply_multipliers(const SpectralField& f, std::initializer_list<SpectralMultiplier> chain);

/// || prod(chain) f ||
double multiplier_norm(const SpectralField& f, std::span<const SpectralMultiplier> chain);
double multiplier_norm(const SpectralField& f, std::initializer_list<SpectralMultiplier> chain);

/// < prod(chain) f, prod(chain) g >
double multiplier_inner(const SpectralField& f, const SpectralField& g,
                        std::initializer_list<SpectralMultiplier> chain);

struct GevreyParams {
  double tau = 0.0;
  double r = 0.0;
  double gamma = 0.0;
  double s = 0.0;
};

enum class NormFamily { isotropic, anisotropic };
enum class NormKind { full, seminorm, L2 };

/// isotropic full:  (sum (1 + |k|^{2r}) e^{2 tau |k|} |f_k|^2)^{1/2}
/// anisotropic full: (sum (1 + |k'|^{2r} + |k3|^{2s}) e^{2 tau |k'|} e^{2 gamma |k3|} |f_k|^2)^{1/2}
/// seminorm: ||A^r e^{tau A} f|| or ||A^r e^{tau A_h} e^{gamma A_z} f||
double norm(const SpectralField& f, const GevreyParams& p, NormFamily family, NormKind kind);

struct SpectrumBucket {
  double kz = 0.0;
  double energy = 0.0;
  int count = 0;
};

/// Energy aggregated by |k3| (one bucket per m3 = 0..N), with retained mode counts.
std::vector<SpectrumBucket> vertical_spectrum_decay(const SpectralField& f);

/// gamma from a least-squares fit of log(energy / count) = c - 2 gamma |k3|.
double fit_vertical_decay_rate(const std::vector<SpectrumBucket>& spectrum);

}  // namespace gpe
