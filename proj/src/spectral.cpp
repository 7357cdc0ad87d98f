#include "gpe/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "gpe/errors.hpp"

namespace gpe {

using detail::CBuffer;
using detail::kInvSqrt2;

SpectralField project_Pn(const SpectralField& f, int Np) {
  if (Np < 0) throw InvalidArgument("project_Pn: N' must be >= 0");
  if (Np > f.order()) throw InvalidArgument("project_Pn: N' exceeds the field order");
  SpectralField out = f;
  const long n2 = static_cast<long>(Np) * Np;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (long(m.m1) * m.m1 + long(m.m2) * m.m2 + long(m.m3) * m.m3 > n2) out[i] = {cplx{}, cplx{}};
  }
  return out;
}

SpectralField project_D0(const SpectralField& f) {
  SpectralField out = f;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (m.m3 != 0 || (m.m1 == 0 && m.m2 == 0)) continue;
    const double k1 = m.m1, k2 = m.m2;
    const cplx dot = (k1 * out[i][0] + k2 * out[i][1]) / (k1 * k1 + k2 * k2);
    out[i][0] -= dot * k1;
    out[i][1] -= dot * k2;
  }
  return out;
}

int grid_size(int N, double padding) {
  if (padding == 1.0) return 2 * N + 2;
  if (padding == 1.5) return 3 * N + 3;
  throw InvalidArgument("padding must be 1 or 3/2");
}

GridField to_grid(const SpectralField& f, double padding) {
  const int M = grid_size(f.order(), padding);
  const auto& plan = detail::fft_plan(M);
  CBuffer buf(plan.volume());
  detail::scatter(f.modes(), M, buf.data(), [&](std::size_t i, int) {
    const cplx z = f[i][0] + cplx(0.0, 1.0) * f[i][1];
    return f.modes()[i].m3 == 0 ? z : z * kInvSqrt2;
  });
  plan.backward(buf.data());
  GridField g;
  g.M = M;
  g.u.resize(plan.volume());
  g.v.resize(plan.volume());
  for (std::size_t j = 0; j < plan.volume(); ++j) {
    g.u[j] = buf[j].real();
    g.v[j] = buf[j].imag();
  }
  return g;
}

SpectralField to_spectral(const GridField& g, int N) {
  if (N < 0) throw InvalidArgument("to_spectral: N must be >= 0");
  if (g.M != 2 * N + 2 && g.M != 3 * N + 3)
    throw InvalidArgument("to_spectral: grid size inconsistent with N and padding");
  const std::size_t n = static_cast<std::size_t>(g.M) * g.M * g.M;
  if (g.u.size() != n || g.v.size() != n) throw InvalidArgument("to_spectral: grid arrays have wrong size");
  const auto& plan = detail::fft_plan(g.M);
  CBuffer buf(n);
  for (std::size_t j = 0; j < n; ++j) buf[j] = cplx(g.u[j], g.v[j]);
  plan.forward(buf.data());
  SpectralField out(N);
  detail::gather_pair(buf.data(), g.M, 1.0 / static_cast<double>(n), out);
  enforce_reality(out);
  return out;
}

SineField vertical_velocity(const SpectralField& V) {
  const double scale = std::max(1.0, l2_norm(V));
  if (d0_defect(V) > 1e-10 * scale)
    throw ContractViolation("vertical_velocity: input is not in D0");
  SineField w{V.mode_set(), std::vector<cplx>(V.size())};
  const auto& ms = V.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (m.m3 == 0) continue;
    const cplx div = double(m.m1) * V[i][0] + double(m.m2) * V[i][1];
    w.c[i] = cplx(0.0, -1.0) * div / double(m.m3);
  }
  return w;
}

PoincareResult poincare_check(const SpectralField& f, int Np) {
  if (Np < 1 || Np >= f.order())
    throw InvalidArgument("poincare_check: need 1 <= N' < field order");
  const double n = kTwoPi * Np;
  const long n2 = static_cast<long>(Np) * Np;
  PoincareResult r;
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (long(m.m1) * m.m1 + long(m.m2) * m.m2 + long(m.m3) * m.m3 <= n2) continue;
    const double a2 = std::norm(f[i][0]) + std::norm(f[i][1]);
    r.lhs += a2;
    r.rhs += ms.k(i) * a2;
  }
  r.rhs /= n;
  return r;
}

SpectralField scalar_product(const SpectralField& f, const SpectralField& g) {
  if (f.order() != g.order()) throw InvalidArgument("scalar_product: orders differ");
  const int N = f.order();
  const int M = 4 * N + 2;
  const auto& plan = detail::fft_plan(M);
  CBuffer buf(plan.volume());
  detail::scatter(f.modes(), M, buf.data(), [&](std::size_t i, int) {
    const cplx z = f[i][0] + cplx(0.0, 1.0) * g[i][0];
    return f.modes()[i].m3 == 0 ? z : z * kInvSqrt2;
  });
  plan.backward(buf.data());
  for (std::size_t j = 0; j < plan.volume(); ++j) buf[j] = cplx(buf[j].real() * buf[j].imag(), 0.0);
  plan.forward(buf.data());
  SpectralField out(2 * N);
  detail::gather_pair(buf.data(), M, 1.0 / static_cast<double>(plan.volume()), out);
  for (auto& c : out.data()) c[1] = cplx{};
  enforce_reality(out);
  return out;
}

}  // namespace gpe
