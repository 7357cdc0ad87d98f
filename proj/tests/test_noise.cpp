#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gpe/errors.hpp"
#include "gpe/noise.hpp"
#include "gpe/spectral.hpp"

using namespace gpe;

namespace {

SpectralField sample(int N, std::uint64_t seed) {
  Rng rng(seed);
  RandomFieldSpec s;
  s.mu = 0.2;
  s.q = 2.0;
  return random_field(N, s, rng);
}

}  // namespace

TEST_CASE("noise weights sum to c squared") {
  for (auto kind : {NoiseKind::additive, NoiseKind::multiplicative, NoiseKind::half_derivative,
                    NoiseKind::vertical_transport}) {
    const auto m = make_noise_model(kind, 7, 0.3, 3, 3.0, 1.0, 0.5, 4);
    CHECK(m.alpha.size() == 7);
    CHECK(m.amplitude_sq() == doctest::Approx(0.09).epsilon(1e-14));
  }
  CHECK(make_noise_model(NoiseKind::none, 4, 0.3, 3, 3.0, 1.0, 0.5, 4).amplitude_sq() == 0.0);
  CHECK_THROWS_AS(make_noise_model(NoiseKind::additive, 0, 0.3, 3, 3.0, 1.0, 0.5, 4), InvalidArgument);
}

TEST_CASE("additive fields are normalized D0 fields and embed") {
  const auto m = make_noise_model(NoiseKind::additive, 4, 1.0, 3, 3.0, 1.0, 0.5, 4);
  REQUIRE(m.g.size() == 4);
  for (const auto& g : m.g) {
    CHECK(norm(g, {0.5, 3.0, 0.0, 3.0}, NormFamily::isotropic, NormKind::full) == doctest::Approx(1.0));
    CHECK(d0_defect(g) < 1e-15);
  }
  const auto e = m.embedded(5);
  CHECK(e.g[2].order() == 5);
  CHECK(e.g[2].at(1, 1, 1)[0] == m.g[2].at(1, 1, 1)[0]);
  // distinct substreams
  CHECK(m.g[0].at(1, 0, 1)[0] != m.g[1].at(1, 0, 1)[0]);
}

TEST_CASE("apply_noise equals the sum of the noise maps") {
  const auto V = sample(3, 1);
  const std::vector<double> dW{0.1, -0.2, 0.05, 0.3};
  for (auto kind : {NoiseKind::additive, NoiseKind::multiplicative, NoiseKind::half_derivative,
                    NoiseKind::vertical_transport}) {
    const auto m = make_noise_model(kind, 4, 0.7, 3, 3.0, 1.0, 0.5, 2);
    SpectralField want(V.mode_set());
    for (int k = 0; k < 4; ++k) want.axpy(dW[k], noise_map(m, V, k));
    want = project_D0(want);
    const auto got = apply_noise(m, V, dW, Regime::viscous);
    CHECK(d0_defect(got) < 1e-15);
    for (std::size_t i = 0; i < V.size(); ++i) CHECK(std::abs(got[i][0] - want[i][0]) < 1e-15);
  }
}

TEST_CASE("multiplicative noise is V times the weighted increment") {
  const auto V = sample(3, 2);
  const auto m = make_noise_model(NoiseKind::multiplicative, 3, 0.6, 3, 3.0, 1.0, 0.5, 2);
  const std::vector<double> dW{0.2, -0.1, 0.4};
  const double s = (0.2 - 0.1 + 0.4) * 0.6 / std::sqrt(3.0);
  const auto got = apply_noise(m, V, dW, Regime::inviscid);
  for (std::size_t i = 0; i < V.size(); ++i) CHECK(std::abs(got[i][1] - s * V[i][1]) < 1e-15);
}

TEST_CASE("vertical transport multiplies by |k3|") {
  SpectralField V(2);
  V.set_mode({0, 0, 2}, 1.0, 0.0);
  V.set_mode({1, 0, 0}, 0.0, 1.0);
  const auto m = make_noise_model(NoiseKind::vertical_transport, 1, 0.5, 2, 3.0, 1.0, 0.5, 2);
  const std::vector<double> dW{1.0};
  const auto S = apply_noise(m, V, dW, Regime::viscous);
  CHECK(S.at(0, 0, 2)[0].real() == doctest::Approx(0.5 * 2 * kTwoPi));
  CHECK(std::abs(S.at(1, 0, 0)[1]) == 0.0);
  CHECK_THROWS_AS(apply_noise(m, V, dW, Regime::inviscid), ConfigError);
  CHECK_THROWS_AS(apply_noise(m, V, std::vector<double>{1.0, 2.0}, Regime::viscous), InvalidArgument);
}

TEST_CASE("wiener increments have variance dt") {
  Rng rng(5);
  const int n = 20000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto d = wiener_increments(1, 0.01, rng);
    s += d[0];
    s2 += d[0] * d[0];
  }
  CHECK(std::abs(s / n) < 5 * 0.1 / std::sqrt(double(n)));
  CHECK(s2 / n == doctest::Approx(0.01).epsilon(0.05));
  CHECK_THROWS_AS(wiener_increments(1, 0.0, rng), InvalidArgument);
}

TEST_CASE("noise conditions: multiplicative Lipschitz constant is sum alpha^2") {
  const auto m = make_noise_model(NoiseKind::multiplicative, 5, 0.8, 3, 3.0, 1.0, 0.5, 2);
  Rng rng(3);
  const auto rep = verify_noise_conditions(m, {0.2, 3.0, 0.0, 3.0}, Regime::inviscid, 100, rng);
  CHECK(rep.finite);
  CHECK(rep.lipschitz_C == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(rep.growth_C <= 0.64 * (1 + 1e-12));
  CHECK_THROWS_AS(verify_noise_conditions(m, {0.2, 3.0, 0.0, 3.0}, Regime::inviscid, 10, rng), InvalidArgument);
}

TEST_CASE("noise kind names round-trip") {
  for (auto k : {NoiseKind::none, NoiseKind::additive, NoiseKind::multiplicative, NoiseKind::half_derivative,
                 NoiseKind::vertical_transport})
    CHECK(noise_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(noise_kind_from_string("pink"), ConfigError);
}
