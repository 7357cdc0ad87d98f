#include <doctest.h>

#include <cmath>

#include "gpe/errors.hpp"
#include "gpe/random_field.hpp"
#include "gpe/spectral.hpp"
#include "oracles.hpp"

using namespace gpe;

namespace {

SpectralField sample(int N, std::uint64_t seed, bool d0 = true, double mu = 0.1) {
  Rng rng(seed);
  RandomFieldSpec s;
  s.mu = mu;
  s.q = 1.0;
  s.in_d0 = d0;
  return random_field(N, s, rng);
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int c = 0; c < 2; ++c) d = std::max(d, std::abs(a[i][c] - b[i][c]));
  return d;
}

}  // namespace

TEST_CASE("random fields are real-valued: partner coefficients are conjugate") {
  const auto f = sample(4, 1, false);
  CHECK(reality_defect(f) == 0.0);
  const auto& ms = f.modes();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    CHECK(f[ms.partner(i)][0] == std::conj(f[i][0]));
  }
  const double x = 0.3, y = 0.7, z = 0.11;
  CHECK(std::abs(oracle::eval(f, 0, x, y, z).imag()) < 1e-14);
}

TEST_CASE("to_grid matches direct evaluation of the mode sum") {
  const auto f = sample(3, 2, false);
  for (double pad : {1.0, 1.5}) {
    const auto g = to_grid(f, pad);
    const int M = g.M;
    CHECK(M == grid_size(3, pad));
    for (int a = 0; a < M; a += 3)
      for (int b = 0; b < M; b += 2)
        for (int c = 0; c < M; ++c) {
          const std::size_t idx = (std::size_t(a) * M + b) * M + c;
          const double x = double(a) / M, y = double(b) / M, z = double(c) / M;
          CHECK(g.u[idx] == doctest::Approx(oracle::eval(f, 0, x, y, z).real()).epsilon(1e-12).scale(1.0));
          CHECK(g.v[idx] == doctest::Approx(oracle::eval(f, 1, x, y, z).real()).epsilon(1e-12).scale(1.0));
        }
  }
}

TEST_CASE("to_spectral inverts to_grid") {
  const auto f = sample(4, 3, false);
  for (double pad : {1.0, 1.5}) CHECK(max_diff(to_spectral(to_grid(f, pad), 4), f) < 1e-14);
  GridField bad{7, std::vector<double>(343), std::vector<double>(343)};
  CHECK_THROWS_AS(to_spectral(bad, 4), InvalidArgument);
}

TEST_CASE("project_D0 removes the vertical-mean divergence and is idempotent") {
  const auto f = sample(4, 4, false);
  CHECK(d0_defect(f) > 1e-3);
  const auto p = project_D0(f);
  CHECK(d0_defect(p) < 1e-15);
  CHECK(max_diff(project_D0(p), p) < 1e-16);
  // orthogonal projection: <f - Pf, Pf> = 0
  CHECK(std::abs(inner(f - p, p)) < 1e-15);
}

TEST_CASE("vertical velocity matches Simpson quadrature of -int div") {
  const auto f = sample(3, 5);
  const auto w = vertical_velocity(f);
  const auto& ms = f.modes();
  for (double z : {0.0, 0.13, 0.5, 0.77}) {
    const double x = 0.21, y = 0.64;
    oracle::cplx series = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const auto& m = ms[i];
      series += w.c[i] * std::sqrt(2.0) * std::exp(oracle::cplx(0.0, oracle::kTwoPi * (m.m1 * x + m.m2 * y))) *
                std::sin(oracle::kTwoPi * m.m3 * z);
    }
    CHECK(series.real() == doctest::Approx(oracle::vertical_velocity(f, x, y, z)).epsilon(1e-8).scale(1.0));
  }
  // w(z = 1) = 0 because the vertical mean of div f vanishes
  CHECK(std::abs(oracle::vertical_velocity(f, 0.3, 0.4, 1.0)) < 1e-10);
  CHECK_THROWS_AS(vertical_velocity(sample(3, 6, false)), ContractViolation);
}

TEST_CASE("product of two single modes matches the hand convolution") {
  // f = a sqrt2 cos(2 pi z), so f^2 = a^2 + (a^2 / sqrt2) sqrt2 cos(4 pi z)
  SpectralField f(2);
  const double a = 0.7;
  f.set_mode({0, 0, 1}, a, 0.0);
  const auto p = scalar_product(f, f);
  CHECK(p.order() == 4);
  CHECK(p.at(0, 0, 0)[0].real() == doctest::Approx(a * a).epsilon(1e-14));
  CHECK(p.at(0, 0, 2)[0].real() == doctest::Approx(a * a / std::sqrt(2.0)).epsilon(1e-14));
  double rest = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& m = p.modes()[i];
    if ((m.m1 == 0 && m.m2 == 0 && (m.m3 == 0 || m.m3 == 2))) continue;
    rest += std::abs(p[i][0]) + std::abs(p[i][1]);
  }
  CHECK(rest < 1e-14);

  // e^{2 pi i x} + c.c. = 2 cos(2 pi x) times sqrt2 cos(2 pi z)
  SpectralField g(2), h(2);
  g.set_mode({1, 0, 0}, 0.5, 0.0);
  h.set_mode({0, 0, 1}, 1.0, 0.0);
  const auto q = scalar_product(g, h);
  CHECK(q.at(1, 0, 1)[0].real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q.at(-1, 0, 1)[0].real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("product of random fields matches grid quadrature") {
  const auto f = sample(2, 7, false), g = sample(2, 8, false);
  const auto p = scalar_product(f, g);
  const auto fun = [&](double x, double y, double z) {
    return oracle::eval(f, 0, x, y, z).real() * oracle::eval(g, 0, x, y, z).real();
  };
  for (auto m : {ModeIndex{0, 0, 0}, ModeIndex{1, -1, 2}, ModeIndex{2, 1, 3}, ModeIndex{-4, 0, 0}}) {
    const auto want = oracle::project(fun, m.m1, m.m2, m.m3, 10);
    CHECK(std::abs(p.at(m.m1, m.m2, m.m3)[0] - want) < 1e-13);
  }
}

TEST_CASE("P_N projection and Poincare inequality") {
  const auto f = sample(6, 9, false, 0.0);
  const auto p = project_Pn(f, 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& m = p.modes()[i];
    if (m.m1 * m.m1 + m.m2 * m.m2 + m.m3 * m.m3 > 9) CHECK(std::abs(p[i][0]) == 0.0);
    else CHECK(p[i][0] == f[i][0]);
  }
  CHECK_THROWS_AS(project_Pn(f, 7), InvalidArgument);
  CHECK_THROWS_AS(project_Pn(f, -1), InvalidArgument);

  for (int Np : {1, 2, 4}) {
    const auto r = poincare_check(f, Np);
    // direct sums over |m| > N'
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto& m = f.modes()[i];
      const int n2 = m.m1 * m.m1 + m.m2 * m.m2 + m.m3 * m.m3;
      if (n2 <= Np * Np) continue;
      const double a2 = std::norm(f[i][0]) + std::norm(f[i][1]);
      lhs += a2;
      rhs += std::sqrt(double(n2)) * a2 / Np;
    }
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-13));
    CHECK(r.rhs == doctest::Approx(rhs).epsilon(1e-13));
    CHECK(r.lhs <= r.rhs);
  }
  CHECK_THROWS_AS(poincare_check(f, 6), InvalidArgument);
}

TEST_CASE("embed pads and truncates") {
  const auto f = sample(3, 10);
  const auto up = embed(f, 5);
  CHECK(up.order() == 5);
  CHECK(up.at(1, 2, 1)[0] == f.at(1, 2, 1)[0]);
  CHECK(up.at(4, 0, 0)[0] == oracle::cplx(0.0));
  CHECK(max_diff(embed(up, 3), f) == 0.0);
}
