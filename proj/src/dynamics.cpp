#include "gpe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fft.hpp"
#include "gpe/errors.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

using detail::CBuffer;
using detail::kInvSqrt2;

double cutoff_theta(double x, const CutoffSpec& spec) {
  if (!(spec.rho > 0.0)) throw InvalidArgument("cutoff_theta: rho must be > 0");
  const double u = (spec.rho - std::abs(x)) / (0.5 * spec.rho);
  if (u >= 1.0) return 1.0;
  if (u <= 0.0) return 0.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

RadiusSchedule radius_schedule(Regime mode, double tau0, double rho, double C_cal, double, double,
                               double nu_z) {
  if (!(tau0 > 0.0) || !(rho > 0.0) || !(C_cal > 0.0))
    throw InvalidArgument("radius_schedule: tau0, rho and C_cal must be > 0");
  RadiusSchedule s;
  s.regime = mode;
  s.tau0 = tau0;
  if (mode == Regime::inviscid) {
    s.T_max = tau0 / (2.0 * C_cal * (rho + 1.0));
  } else {
    s.T_max = tau0 / (2.0 * C_cal * (rho * rho + 1.0));
    s.gamma_rate = nu_z / 8.0;
  }
  return s;
}

GevreyParams active_params(const RadiusSchedule& s, double t, double r) {
  GevreyParams p;
  p.tau = s.tau(t);
  p.r = r;
  p.s = r;
  p.gamma = s.regime == Regime::viscous ? s.gamma(t) : 0.0;
  return p;
}

NormFamily active_family(Regime mode) {
  return mode == Regime::inviscid ? NormFamily::isotropic : NormFamily::anisotropic;
}

double active_norm(const SpectralField& V, const RadiusSchedule& s, double t, double r) {
  return norm(V, active_params(s, t, r), active_family(s.regime), NormKind::full);
}

namespace {

void require_d0(const SpectralField& f, const char* who) {
  const double scale = std::max(1.0, l2_norm(f));
  if (d0_defect(f) > 1e-10 * scale) throw ContractViolation(std::string(who) + ": f is not in D0");
}

/// Full coefficients on the cube [-N, N]^3, offset indexing.
struct FullCube {
  int N;
  int side;
  std::vector<Coeff> c;
  std::vector<cplx> w;
  std::vector<char> in_ball;
  explicit FullCube(int n)
      : N(n), side(2 * n + 1), c(std::size_t(side) * side * side, Coeff{}),
        w(std::size_t(side) * side * side), in_ball(std::size_t(side) * side * side, 0) {}
  std::size_t idx(int m1, int m2, int m3) const {
    return (std::size_t(m1 + N) * side + std::size_t(m2 + N)) * side + std::size_t(m3 + N);
  }
};

FullCube full_coefficients(const SpectralField& f, const SineField* w) {
  FullCube fc(f.order());
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    const double s = m.m3 == 0 ? 1.0 : kInvSqrt2;
    for (int sg : {1, -1}) {
      if (sg < 0 && m.m3 == 0) continue;
      const auto j = fc.idx(m.m1, m.m2, sg * m.m3);
      fc.c[j] = {f[i][0] * s, f[i][1] * s};
      fc.in_ball[j] = 1;
      if (w && m.m3 != 0) fc.w[j] = cplx(0.0, -sg) * w->c[i] * kInvSqrt2;
    }
  }
  return fc;
}

SpectralField q_direct(const SpectralField& f, const SpectralField& g) {
  const int N = f.order();
  const SineField w = vertical_velocity(f);
  const FullCube F = full_coefficients(f, &w);
  const FullCube G = full_coefficients(g, nullptr);
  const auto& ms = f.modes();
  std::vector<std::size_t> ball;
  for (std::size_t j = 0; j < F.in_ball.size(); ++j)
    if (F.in_ball[j]) ball.push_back(j);
  SpectralField out(f.mode_set());
  const auto coord = [&](std::size_t j, int& a, int& b, int& c) {
    c = int(j % F.side) - N;
    b = int((j / F.side) % F.side) - N;
    a = int(j / (std::size_t(F.side) * F.side)) - N;
  };
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& l = ms[i];
    Coeff acc[2] = {{}, {}};
    for (int sg : {1, -1}) {
      if (sg < 0 && l.m3 == 0) continue;
      const int l3 = sg * l.m3;
      Coeff& r = acc[sg > 0 ? 0 : 1];
      for (std::size_t j : ball) {
        int j1, j2, j3;
        coord(j, j1, j2, j3);
        const int k1 = l.m1 - j1, k2 = l.m2 - j2, k3 = l3 - j3;
        if (std::abs(k1) > N || std::abs(k2) > N || std::abs(k3) > N) continue;
        const auto kj = G.idx(k1, k2, k3);
        if (!G.in_ball[kj]) continue;
        const cplx adv = cplx(0.0, kTwoPi) *
                         (F.c[j][0] * double(k1) + F.c[j][1] * double(k2) + F.w[j] * double(k3));
        r[0] += adv * G.c[kj][0];
        r[1] += adv * G.c[kj][1];
      }
    }
    if (l.m3 == 0) {
      out[i] = acc[0];
    } else {
      out[i] = {(acc[0][0] + acc[1][0]) * kInvSqrt2, (acc[0][1] + acc[1][1]) * kInvSqrt2};
    }
  }
  enforce_reality(out);
  return out;
}

SpectralField q_pseudospectral(const SpectralField& f, const SpectralField& g) {
  const int N = f.order();
  const int M = grid_size(N, 1.5);
  const SineField w = vertical_velocity(f);
  const auto& plan = detail::fft_plan(M);
  const auto& ms = f.modes();
  const cplx I(0.0, 1.0);
  CBuffer zf(plan.volume()), zx(plan.volume()), zy(plan.volume()), zz(plan.volume()), zw(plan.volume());
  const auto cosc = [&](const SpectralField& h, std::size_t i) {
    const cplx z = h[i][0] + I * h[i][1];
    return ms[i].m3 == 0 ? z : z * kInvSqrt2;
  };
  detail::scatter(ms, M, zf.data(), [&](std::size_t i, int) { return cosc(f, i); });
  detail::scatter(ms, M, zx.data(),
                  [&](std::size_t i, int) { return I * (kTwoPi * ms[i].m1) * cosc(g, i); });
  detail::scatter(ms, M, zy.data(),
                  [&](std::size_t i, int) { return I * (kTwoPi * ms[i].m2) * cosc(g, i); });
  detail::scatter(ms, M, zz.data(),
                  [&](std::size_t i, int s) { return I * (kTwoPi * s * ms[i].m3) * cosc(g, i); });
  detail::scatter(ms, M, zw.data(), [&](std::size_t i, int s) {
    return ms[i].m3 == 0 ? cplx{} : cplx(0.0, -s) * w.c[i] * kInvSqrt2;
  });
  for (CBuffer* b : {&zf, &zx, &zy, &zz, &zw}) plan.backward(b->data());
  for (std::size_t j = 0; j < plan.volume(); ++j) {
    const double fu = zf[j].real(), fv = zf[j].imag(), ww = zw[j].real();
    const double qu = fu * zx[j].real() + fv * zy[j].real() + ww * zz[j].real();
    const double qv = fu * zx[j].imag() + fv * zy[j].imag() + ww * zz[j].imag();
    zf[j] = cplx(qu, qv);
  }
  plan.forward(zf.data());
  SpectralField out(f.mode_set());
  detail::gather_pair(zf.data(), M, 1.0 / static_cast<double>(plan.volume()), out);
  enforce_reality(out);
  return out;
}

}  // namespace

SpectralField nonlinear_Q(const SpectralField& f, const SpectralField& g, QMethod method) {
  if (f.order() != g.order()) throw InvalidArgument("nonlinear_Q: orders differ");
  require_d0(f, "nonlinear_Q");
  return method == QMethod::direct ? q_direct(f, g) : q_pseudospectral(f, g);
}

SpectralField perp(const SpectralField& V) {
  SpectralField out(V.mode_set());
  for (std::size_t i = 0; i < V.size(); ++i) out[i] = {-V[i][1], V[i][0]};
  return out;
}

SpectralField explicit_drift(const SpectralField& V, double theta, const PhysicsParams& physics,
                             QMethod method) {
  SpectralField d(V.mode_set());
  if (theta != 0.0) d.axpy(-theta, nonlinear_Q(V, V, method));
  if (physics.f0 != 0.0) d.axpy(-physics.f0, perp(V));
  if (!physics.forcing.field.empty()) d -= embed(physics.forcing.field, V.order());
  return project_D0(d);
}

double diffusion_rate(const ModeSet& ms, std::size_t i, const PhysicsParams& physics) {
  return -(physics.nu_z * ms.kz(i) * ms.kz(i) + physics.nu_h * ms.kh(i) * ms.kh(i));
}

SpectralField drift(const SpectralField& V, double t, Regime mode, const PhysicsParams& physics,
                    const CutoffSpec& cutoff, const RadiusSchedule& schedule, double r, QMethod method) {
  if (t < 0.0 || t > schedule.T_max * (1.0 + 1e-12))
    throw HorizonError("drift: t outside [0, T_max] of the radius schedule");
  if (schedule.regime != mode) throw InvalidArgument("drift: schedule regime mismatch");
  const double theta = cutoff_theta(active_norm(V, schedule, t, r), cutoff);
  SpectralField d = explicit_drift(V, theta, physics, method);
  const auto& ms = V.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double lam = diffusion_rate(ms, i, physics);
    d[i][0] += lam * V[i][0];
    d[i][1] += lam * V[i][1];
  }
  return project_D0(d);
}

}  // namespace gpe
