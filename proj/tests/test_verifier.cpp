#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "gpe/errors.hpp"
#include "gpe/random_field.hpp"
#include "gpe/spectral.hpp"
#include "gpe/suite.hpp"
#include "gpe/verifier.hpp"

using namespace gpe;

namespace {

SpectralField sample(int N, std::uint64_t seed) {
  Rng rng(seed);
  RandomFieldSpec s;
  s.mu = 0.2;
  s.q = 2.0;
  return random_field(N, s, rng);
}

StepRecord rec(double t, double gevrey, double semi, double diss) {
  StepRecord r;
  r.t = t;
  r.gevrey = gevrey;
  r.seminorm = semi;
  r.dissipation_sq = diss;
  return r;
}

}  // namespace

TEST_CASE("budget constant solves C (1 + m0) e^{CT} = m") {
  const double C = 0.3, m0 = 1.0, T = 2.0;
  const double m = C * (1 + m0) * std::exp(C * T);
  CHECK(solve_budget_constant(m, m0, T) == doctest::Approx(C).epsilon(1e-13));
  CHECK(solve_budget_constant(0.0, m0, T) == 0.0);
  const double big = 40.0 * 1.5 * std::exp(40.0 * 0.1);
  CHECK(solve_budget_constant(big, 0.5, 0.1) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("energy budget of hand-made trajectories") {
  Trajectory a, b;
  a.records = {rec(0.0, 1.0, 2.0, 3.0), rec(0.5, 2.0, 1.0, 1.0), rec(1.0, 1.5, 1.0, 5.0)};
  b.records = {rec(0.0, 0.5, 1.0, 1.0)};
  const double p = 4.0;
  // a: sup 16, integral 0.5 * 2^2 * 3 + 0.5 * 1 * 1 = 6.5; b: sup 0.0625, no integral
  const double mean = 0.5 * (16.0 + 6.5 + 0.0625);
  const double m0 = 0.5 * (1.0 + 0.0625);
  const auto r = energy_budget({a, b}, p, 1.0);
  CHECK(r.mean_budget == doctest::Approx(mean).epsilon(1e-15));
  CHECK(r.mean_initial == doctest::Approx(m0).epsilon(1e-15));
  CHECK(r.C_emp * (1 + m0) * std::exp(r.C_emp) == doctest::Approx(mean).epsilon(1e-12));
  CHECK_THROWS_AS(energy_budget({}, p, 1.0), InvalidArgument);
  CHECK_THROWS_AS(energy_budget({Trajectory{}}, p, 1.0), InvalidArgument);
}

TEST_CASE("estimate ratios: zero fields and homogeneity") {
  SpectralField z(3);
  const auto f = sample(3, 1), g = sample(3, 2), h = sample(3, 3);
  CHECK(trilinear_iso_ratio(z, z, z, 0.1, 3.0) == 0.0);
  CHECK(trilinear_aniso_ratio(z, z, z, 0.1, 0.05, 3.0) == 0.0);
  const double r1 = trilinear_iso_ratio(f, g, h, 0.1, 3.0);
  CHECK(r1 > 0.0);
  CHECK(trilinear_iso_ratio(3.0 * f, 0.5 * g, 2.0 * h, 0.1, 3.0) == doctest::Approx(r1).epsilon(1e-12));
  CHECK_THROWS_AS(trilinear_iso_ratio(f, g, h, 0.1, 2.0), InvalidArgument);
  SamplingSpec spec;
  spec.samples = 10;
  CHECK(trilinear_scaling_defect(3, spec, {0.5, 2.0, 10.0}) < 1e-12);
}

TEST_CASE("product of constants has ratio one") {
  SpectralField a(2), b(2);
  a.set_mode({0, 0, 0}, 0.7, 0.0);
  b.set_mode({0, 0, 0}, -1.3, 0.0);
  const GevreyParams p{0.2, 3.0, 0.1, 3.0};
  for (auto fam : {NormFamily::isotropic, NormFamily::anisotropic}) {
    CHECK(product_ratio(a, b, p, fam, false) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(product_ratio(a, b, p, fam, true) == 0.0);
  }
}

TEST_CASE("sampled estimates are finite and stable in N") {
  SamplingSpec spec;
  spec.samples = 20;
  spec.workers = 1;
  for (auto kind : {EstimateKind::trilinear_iso, EstimateKind::product_aniso_seminorm}) {
    const auto rows = sample_estimate(kind, {2, 3}, spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].N == 2);
    CHECK(rows[1].samples == 20);
    for (const auto& r : rows) {
      CHECK(std::isfinite(r.worst_ratio));
      CHECK(r.worst_ratio > 0.0);
      CHECK(r.pass);
      CHECK(r.empirical_C == r.worst_ratio);
    }
  }
  InequalityReport a, b;
  a.worst_ratio = 2.0;
  b.worst_ratio = 2.5;
  CHECK(relative_change(a, b) == doctest::Approx(0.25));
}

TEST_CASE("Brownian path aggregates fine increments") {
  const BrownianPath path(3, 0.01, 8, 5);
  const auto coarse = path.increment(1, 4);
  std::vector<double> sum(3, 0.0);
  for (int j = 4; j < 8; ++j) {
    const auto f = path.increment(j, 1);
    for (int k = 0; k < 3; ++k) sum[k] += f[k];
  }
  for (int k = 0; k < 3; ++k) CHECK(coarse[k] == doctest::Approx(sum[k]).epsilon(1e-15));
  CHECK_THROWS_AS(path.increment(2, 4), InvalidArgument);
  CHECK_THROWS_AS(BrownianPath(0, 0.01, 8, 5), InvalidArgument);
}

TEST_CASE("cutoff check accepts the smooth cutoff and rejects faults") {
  const CutoffSpec cs{1.0};
  CHECK(cutoff_check([&](double x) { return cutoff_theta(x, cs); }, 1.0).pass);
  const auto e = cutoff_check([](double x) { return std::exp(-x); }, 1.0);
  CHECK_FALSE(e.pass);
  CHECK(e.detail.find("below rho/2") != std::string::npos);
  CHECK_FALSE(cutoff_check([](double x) { return x < 0.5 ? 1.0 : 1.5 - x; }, 1.0).pass);
  CHECK_FALSE(cutoff_check([](double x) { return x < 0.5 ? 1.0 : (x < 0.7 ? 0.0 : (x < 1.0 ? 0.5 : 0.0)); }, 1.0).pass);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](int i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  parallel_for(0, 2, [](int) { FAIL("called"); });
}

TEST_CASE("Galerkin levels agree exactly on data without horizontal structure") {
  auto cfg = standard_config(Regime::viscous, NoiseKind::multiplicative, 3, 1, 0.0, 20);
  cfg = with_overrides(cfg, {{"ic.kind", "single_mode"}, {"ic.mode", "0,0,1"}, {"ic.component", "1,0.5"}});
  const auto rows = galerkin_convergence(cfg, {3, 4, 5});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].sup_diff == 0.0);
  CHECK(rows[1].sup_diff == 0.0);
  CHECK(rows[0].steps == 20);
  CHECK_THROWS_AS(galerkin_convergence(cfg, {3}), InvalidArgument);
}

TEST_CASE("Galerkin differences shrink with N for generic data") {
  const auto cfg = standard_config(Regime::inviscid, NoiseKind::additive, 3, 2, 0.0, 20);
  const auto rows = galerkin_convergence(cfg, {3, 4, 6});
  CHECK(rows[0].sup_diff > rows[1].sup_diff);
  CHECK(rows[1].sup_diff > 0.0);
}

TEST_CASE("uniqueness: equal data stay equal under a shared path") {
  const auto cfg = standard_config(Regime::inviscid, NoiseKind::multiplicative, 3, 4, 0.5, 30);
  const auto r = uniqueness_experiment(cfg, 11, 1e-6);
  CHECK(r.sup_diff_equal_ic == 0.0);
  CHECK(r.sup_diff_distinct_ic > 0.0);
  CHECK(r.steps == 30);
  CHECK(r.eps == 1e-6);
}

TEST_CASE("formulations agree to first order in dt") {
  const auto cfg = consistency_config(2, 3);
  const auto pb = build_problem(cfg);
  const auto V0 = initial_condition(cfg, trajectory_seed(cfg, 0));
  const auto r = formulation_consistency(pb, V0, cfg.dt, 10 * cfg.dt, 7);
  CHECK(r.err_dt > 0.0);
  CHECK(r.ratio > 0.35);
  CHECK(r.ratio < 0.65);
  CHECK(r.pass);
}

TEST_CASE("resolved buckets drop the ones at the floor") {
  auto mk = [](std::vector<double> e) {
    std::vector<SpectrumBucket> b;
    for (std::size_t i = 0; i < e.size(); ++i) b.push_back({double(i), e[i], 2});
    return b;
  };
  const auto use = resolved_buckets({mk({1.0, 1e-3, 1e-20, 1e-40}), mk({1.0, 1e-4, 1e-35, 1e-50})}, 1e-30);
  CHECK(use == std::vector<bool>{true, true, false, false});
  CHECK(resolved_buckets({}, 1e-30).empty());
}

TEST_CASE("norm sandwich, Poincare and orthogonality sweeps") {
  const GevreyParams p{0.3, 3.0, 0.2, 3.0};
  const auto iso = sandwich_check(NormFamily::isotropic, 4, 50, p, 1);
  CHECK(iso.lower_pass);
  CHECK(iso.upper_pass);
  const auto an = sandwich_check(NormFamily::anisotropic, 4, 50, p, 1);
  CHECK(an.upper_pass);
  CHECK(an.worst_lower_corrected <= 1.0 + 1e-12);
  const auto pc = poincare_sweep(5, {1, 2, 3}, 30, 2);
  CHECK(pc.samples == 90);
  CHECK(pc.failures == 0);
  CHECK(energy_orthogonality(4, 10, 3, QMethod::direct).worst < 1e-12);
  CHECK(q_equivalence(3, 5, 4).worst_rel < 1e-12);
}

TEST_CASE("smoothing requires a viscous configuration") {
  const auto cfg = standard_config(Regime::inviscid, NoiseKind::none, 3, 1);
  CHECK_THROWS_AS(viscous_smoothing(cfg, 1, 0.0, 1), InvalidArgument);
}
