#include "gpe/noise.hpp"

#include <algorithm>
#include <cmath>

#include "gpe/errors.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::none: return "none";
    case NoiseKind::additive: return "additive";
    case NoiseKind::multiplicative: return "multiplicative";
    case NoiseKind::half_derivative: return "half_derivative";
    case NoiseKind::vertical_transport: return "vertical_transport";
  }
  return "none";
}

NoiseKind noise_kind_from_string(const std::string& s) {
  for (auto k : {NoiseKind::none, NoiseKind::additive, NoiseKind::multiplicative,
                 NoiseKind::half_derivative, NoiseKind::vertical_transport})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown noise kind '" + s + "'");
}

double NoiseModel::amplitude_sq() const {
  double s = 0.0;
  for (double a : alpha) s += a * a;
  return s;
}

NoiseModel NoiseModel::embedded(int N) const {
  NoiseModel out = *this;
  for (auto& f : out.g) f = embed(f, N);
  return out;
}

NoiseModel make_noise_model(NoiseKind kind, int m_W, double c, int N, double r, double tau_g,
                            double tau_n, std::uint64_t seed) {
  if (m_W < 1) throw InvalidArgument("noise: m_W must be >= 1");
  NoiseModel m;
  m.kind = kind;
  m.m_W = m_W;
  m.alpha.assign(static_cast<std::size_t>(m_W), kind == NoiseKind::none ? 0.0 : c / std::sqrt(double(m_W)));
  if (kind == NoiseKind::additive) {
    for (int k = 0; k < m_W; ++k) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
      RandomFieldSpec spec;
      spec.mu = tau_g;
      spec.q = r + 2.0;
      SpectralField gk = random_field(N, spec, rng);
      const double n = norm(gk, {tau_n, r, 0.0, r}, NormFamily::isotropic, NormKind::full);
      if (n > 0.0) gk *= 1.0 / n;
      m.g.push_back(std::move(gk));
    }
  }
  return m;
}

std::vector<double> wiener_increments(int m_W, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw InvalidArgument("wiener_increments: dt must be > 0");
  std::vector<double> out(static_cast<std::size_t>(m_W));
  const double s = std::sqrt(dt);
  for (auto& x : out) x = s * rng.normal();
  return out;
}

SpectralField noise_map(const NoiseModel& model, const SpectralField& V, int k) {
  const double a = model.alpha.at(static_cast<std::size_t>(k));
  switch (model.kind) {
    case NoiseKind::none: return SpectralField(V.mode_set());
    case NoiseKind::additive: return a * embed(model.g.at(static_cast<std::size_t>(k)), V.order());
    case NoiseKind::multiplicative: return a * V;
    case NoiseKind::half_derivative:
      return (a / (1.0 + k)) * apply_multiplier(V, SpectralMultiplier::power(0.5));
    case NoiseKind::vertical_transport: return a * apply_multiplier(V, SpectralMultiplier::power_z(1.0));
  }
  return SpectralField(V.mode_set());
}

SpectralField apply_noise(const NoiseModel& model, const SpectralField& V, std::span<const double> dW,
                          Regime mode) {
  if (model.viscous_only() && mode == Regime::inviscid)
    throw ConfigError("noise kind vertical_transport is not admissible in inviscid mode");
  if (dW.size() != static_cast<std::size_t>(model.m_W)) throw InvalidArgument("apply_noise: dW length != m_W");
  SpectralField out(V.mode_set());
  switch (model.kind) {
    case NoiseKind::none: return out;
    case NoiseKind::additive:
      for (int k = 0; k < model.m_W; ++k) out.axpy(model.alpha[k] * dW[k], embed(model.g[k], V.order()));
      break;
    case NoiseKind::multiplicative: {
      double s = 0.0;
      for (int k = 0; k < model.m_W; ++k) s += model.alpha[k] * dW[k];
      out.axpy(s, V);
      break;
    }
    case NoiseKind::half_derivative: {
      double s = 0.0;
      for (int k = 0; k < model.m_W; ++k) s += model.alpha[k] * dW[k] / (1.0 + k);
      out.axpy(s, apply_multiplier(V, SpectralMultiplier::power(0.5)));
      break;
    }
    case NoiseKind::vertical_transport: {
      double s = 0.0;
      for (int k = 0; k < model.m_W; ++k) s += model.alpha[k] * dW[k];
      out.axpy(s, apply_multiplier(V, SpectralMultiplier::power_z(1.0)));
      break;
    }
  }
  return project_D0(out);
}

double hilbert_schmidt_sq(const NoiseModel& model, const SpectralField& V, const GevreyParams& p,
                          Regime mode) {
  double s = 0.0;
  for (int k = 0; k < model.m_W; ++k) {
    const double n = norm(noise_map(model, V, k), p, active_family(mode), NormKind::full);
    s += n * n;
  }
  return s;
}

NoiseReport verify_noise_conditions(const NoiseModel& model, const GevreyParams& params, Regime mode,
                                    int samples, Rng& rng) {
  if (samples < 100) throw InvalidArgument("verify_noise_conditions: samples must be >= 100");
  NoiseReport rep;
  rep.kind = to_string(model.kind);
  rep.samples = samples;
  const auto fam = active_family(mode);
  const int N = model.g.empty() ? 4 : model.g.front().order();
  GevreyParams half = params;
  half.r = params.r + 0.5;
  half.s = mode == Regime::viscous ? params.r : params.r + 0.5;
  const auto sq = [](double x) { return x * x; };
  for (int n = 0; n < samples; ++n) {
    RandomFieldSpec spec;
    spec.mu = params.tau + 0.3;
    spec.q = params.r + 2.0;
    const double scale = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    SpectralField V = random_field(N, spec, rng);
    SpectralField W = random_field(N, spec, rng);
    const double v0 = norm(V, params, fam, NormKind::full);
    if (v0 > 0) V *= scale / v0;
    const double w0 = norm(W, params, fam, NormKind::full);
    if (w0 > 0) W *= scale / w0;
    const SpectralField D = V - W;

    double hs = 0.0, hs_diff = 0.0;
    for (int k = 0; k < model.m_W; ++k) {
      const SpectralField a = project_D0(noise_map(model, V, k));
      const SpectralField b = project_D0(noise_map(model, W, k));
      hs += sq(norm(a, params, fam, NormKind::full));
      hs_diff += sq(norm(a - b, params, fam, NormKind::full));
    }
    const double v_half = sq(norm(V, half, fam, NormKind::full));
    const double d_half = sq(norm(D, half, fam, NormKind::full));
    rep.growth_C_literal = std::max(rep.growth_C_literal, hs / (1.0 + v_half));
    if (d_half > 0) rep.lipschitz_C_literal = std::max(rep.lipschitz_C_literal, hs_diff / d_half);

    switch (model.kind) {
      case NoiseKind::none: break;
      case NoiseKind::additive:
        rep.growth_C = std::max(rep.growth_C, hs / (1.0 + sq(norm(V, params, fam, NormKind::full))));
        break;
      case NoiseKind::multiplicative: {
        const double vn = sq(norm(V, params, fam, NormKind::full));
        const double dn = sq(norm(D, params, fam, NormKind::full));
        rep.growth_C = std::max(rep.growth_C, hs / (1.0 + vn));
        if (dn > 0) rep.lipschitz_C = std::max(rep.lipschitz_C, hs_diff / dn);
        break;
      }
      case NoiseKind::half_derivative:
        rep.growth_C = std::max(rep.growth_C, hs / (1.0 + v_half));
        if (d_half > 0) rep.lipschitz_C = std::max(rep.lipschitz_C, hs_diff / d_half);
        break;
      case NoiseKind::vertical_transport: {
        const auto dz = SpectralMultiplier::power_z(1.0);
        const double vz = sq(norm(apply_multiplier(V, dz), params, fam, NormKind::full));
        const double dzn = sq(norm(apply_multiplier(D, dz), params, fam, NormKind::full));
        if (vz > 0) rep.delta_emp_sq = std::max(rep.delta_emp_sq, hs / vz);
        if (dzn > 0) rep.delta_emp_sq = std::max(rep.delta_emp_sq, hs_diff / dzn);
        break;
      }
    }
  }
  rep.finite = std::isfinite(rep.growth_C) && std::isfinite(rep.lipschitz_C) &&
               std::isfinite(rep.delta_emp_sq) && std::isfinite(rep.growth_C_literal) &&
               std::isfinite(rep.lipschitz_C_literal);
  return rep;
}

}  // namespace gpe
