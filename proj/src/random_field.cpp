#include "gpe/random_field.hpp"

#include <cmath>

#include "gpe/spectral.hpp"

namespace gpe {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

SpectralField random_field(int N, const RandomFieldSpec& spec, Rng& rng) {
  SpectralField f(N);
  const auto& ms = f.modes();
  const double mu_z = spec.mu_z < 0 ? spec.mu : spec.mu_z;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto p = ms.partner(i);
    if (p < i) continue;
    const double s = std::exp(-spec.mu * ms.kh(i) - mu_z * ms.kz(i)) * std::pow(1.0 + ms.k(i), -spec.q) *
                     std::sqrt(0.5);
    const double a = rng.normal(), b = rng.normal(), c = rng.normal(), d = rng.normal();
    f.set_mode(ms[i], cplx(a, b) * s, cplx(c, d) * s);
  }
  return spec.in_d0 ? project_D0(f) : f;
}

}  // namespace gpe
