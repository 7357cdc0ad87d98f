#include "gpe/norms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gpe/errors.hpp"

namespace gpe {

namespace {

double log_power(double x, double a) {
  if (a == 0.0) return 0.0;
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  return a * std::log(x);
}

double chain_log(std::span<const SpectralMultiplier> chain, const ModeSet& ms, std::size_t i) {
  double s = 0.0;
  for (const auto& m : chain) s += log_multiplier(m, ms.k(i), ms.kh(i), ms.kz(i));
  return s;
}

double weight(double lw) { return std::exp(lw); }

}  // namespace

double log_multiplier(const SpectralMultiplier& m, double k, double kh, double kz) {
  switch (m.kind) {
    case MultKind::A: return log_power(k, m.a);
    case MultKind::Ah: return log_power(kh, m.a);
    case MultKind::Az: return log_power(kz, m.a);
    case MultKind::ExpA: return m.tau * k;
    case MultKind::ExpAhAz: return m.tau * kh + m.gamma * kz;
  }
  return 0.0;
}

void check_radius(const ModeSet& ms, const SpectralMultiplier& m) {
  if (m.kind != MultKind::ExpA && m.kind != MultKind::ExpAhAz) return;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double e = std::abs(log_multiplier(m, ms.k(i), ms.kh(i), ms.kz(i)));
    if (e > kMaxExponent) {
      std::ostringstream os;
      os << "radius too large: exponent " << e << " > " << kMaxExponent << " at mode (" << ms[i].m1
         << "," << ms[i].m2 << "," << ms[i].m3 << ")";
      throw RadiusTooLarge(os.str());
    }
  }
}

SpectralField apply_multipliers(const SpectralField& f, std::span<const SpectralMultiplier> chain) {
  for (const auto& m : chain) check_radius(f.modes(), m);
  SpectralField out = f;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double w = weight(chain_log(chain, ms, i));
    out[i][0] *= w;
    out[i][1] *= w;
  }
  return out;
}

SpectralField apply_multipliers(const SpectralField& f, std::initializer_list<SpectralMultiplier> chain) {
  return apply_multipliers(f, std::span<const SpectralMultiplier>(chain.begin(), chain.size()));
}

SpectralField apply_multiplier(const SpectralField& f, const SpectralMultiplier& m) {
  return apply_multipliers(f, std::span<const SpectralMultiplier>(&m, 1));
}

double multiplier_norm(const SpectralField& f, std::span<const SpectralMultiplier> chain) {
  for (const auto& m : chain) check_radius(f.modes(), m);
  SumSquares acc;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) acc.add_abs2(weight(chain_log(chain, ms, i)), f[i]);
  return acc.norm();
}

double multiplier_norm(const SpectralField& f, std::initializer_list<SpectralMultiplier> chain) {
  return multiplier_norm(f, std::span<const SpectralMultiplier>(chain.begin(), chain.size()));
}

double multiplier_inner(const SpectralField& f, const SpectralField& g,
                        std::initializer_list<SpectralMultiplier> chain) {
  if (f.order() != g.order()) throw InvalidArgument("multiplier_inner: orders differ");
  const std::span<const SpectralMultiplier> c(chain.begin(), chain.size());
  for (const auto& m : c) check_radius(f.modes(), m);
  double s = 0.0;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double w = weight(2.0 * chain_log(c, ms, i));
    s += w * (f[i][0] * std::conj(g[i][0]) + f[i][1] * std::conj(g[i][1])).real();
  }
  return s;
}

double norm(const SpectralField& f, const GevreyParams& p, NormFamily family, NormKind kind) {
  if (p.tau < 0 || p.r < 0 || p.gamma < 0 || p.s < 0)
    throw InvalidArgument("norm: Gevrey parameters must be nonnegative");
  if (kind == NormKind::L2) return l2_norm(f);
  const auto& ms = f.modes();
  const bool iso = family == NormFamily::isotropic;
  const auto e = iso ? SpectralMultiplier::exp_iso(p.tau) : SpectralMultiplier::exp_aniso(p.tau, p.gamma);
  check_radius(ms, e);
  SumSquares acc;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double k = ms.k(i), kh = ms.kh(i), kz = ms.kz(i);
    const double le = log_multiplier(e, k, kh, kz);
    double lw;
    if (kind == NormKind::seminorm) {
      lw = log_power(k, p.r) + le;
    } else if (iso) {
      lw = 0.5 * std::log1p(std::exp(log_power(k, 2.0 * p.r))) + le;
    } else {
      lw = 0.5 * std::log(1.0 + std::exp(log_power(kh, 2.0 * p.r)) + std::exp(log_power(kz, 2.0 * p.s))) + le;
    }
    acc.add_abs2(weight(lw), f[i]);
  }
  return acc.norm();
}

std::vector<SpectrumBucket> vertical_spectrum_decay(const SpectralField& f) {
  std::vector<SpectrumBucket> out(static_cast<std::size_t>(f.order()) + 1);
  for (std::size_t b = 0; b < out.size(); ++b) out[b].kz = kTwoPi * static_cast<double>(b);
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto& b = out[static_cast<std::size_t>(ms[i].m3)];
    b.energy += std::norm(f[i][0]) + std::norm(f[i][1]);
    b.count += 1;
  }
  return out;
}

double fit_vertical_decay_rate(const std::vector<SpectrumBucket>& spectrum) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& b : spectrum) {
    if (b.count == 0 || !(b.energy > 0.0)) continue;
    const double y = std::log(b.energy / b.count);
    sx += b.kz;
    sy += y;
    sxx += b.kz * b.kz;
    sxy += b.kz * y;
    ++n;
  }
  if (n < 2) throw InvalidArgument("fit_vertical_decay_rate: need two nonempty buckets");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -0.5 * slope;
}

}  // namespace gpe
