#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

#include "gpe/config.hpp"
#include "gpe/errors.hpp"
#include "gpe/random_field.hpp"
#include "gpe/snapshot.hpp"
#include "gpe/spectral.hpp"

using namespace gpe;

namespace {

const std::string kBase =
    "mode = inviscid\nN = 3\ntau0 = 0.5\nrho = 1\nM = 0.5\nr = 3\nic.norm = 0.2\n";
const std::string kVisc =
    "mode = viscous\nN = 3\ntau0 = 0.5\nrho = 1\nM = 0.5\nr = 3\nphysics.nu_z = 0.4\nic.norm = 0.2\n";

SimConfig parse(const std::string& s) { return parse_config_text(s, false); }

// base with the keys of `extra` replaced
std::string with(const std::string& base, const std::string& extra) {
  std::set<std::string> keys;
  std::istringstream ex(extra);
  for (std::string l; std::getline(ex, l);) keys.insert(l.substr(0, l.find(" =")));
  std::string out;
  std::istringstream in(base);
  for (std::string l; std::getline(in, l);)
    if (!keys.count(l.substr(0, l.find(" =")))) out += l + "\n";
  return out + extra;
}

std::string resolved(const SimConfig& c, const std::string& k) {
  for (const auto& [key, v] : c.resolved)
    if (key == k) return v;
  return "<missing>";
}

}  // namespace

TEST_CASE("minimal config resolves the derived defaults") {
  const auto c = parse(kBase);
  CHECK(c.mode == Regime::inviscid);
  CHECK(c.N == 3);
  CHECK(c.C_cal == kDefaultCcal);
  CHECK(c.ic.mu == 1.0);
  CHECK(c.ic.q == 5.0);
  CHECK(c.forcing_tau0_f == 1.0);
  const auto s = schedule_of(c);
  CHECK(c.dt == doctest::Approx(1e-3 * 0.5 / s.tau_rate()).epsilon(1e-15));
  CHECK(resolved(c, "dt") != "auto");
  CHECK(std::stod(resolved(c, "dt")) == c.dt);
  CHECK(resolved(c, "mode") == "inviscid");
  CHECK(c.resolved.size() == config_schema().size());
}

TEST_CASE("dt auto is capped by the noise amplitude") {
  const auto c = parse(kBase + "noise.kind = multiplicative\nnoise.amplitude = 2\n");
  const auto s = schedule_of(c);
  CHECK(c.dt == doctest::Approx(std::min(1e-3 * 0.5 / s.tau_rate(), 1e-3 / 4.0)));
  CHECK(parse(kBase + "dt = 0.01\n").dt == 0.01);
}

TEST_CASE("viscous defaults") {
  const auto c = parse(kVisc);
  CHECK(c.forcing_gamma_star == doctest::Approx(0.4 * 0.5 / 4));
  CHECK(schedule_of(c).gamma_rate == doctest::Approx(0.05));
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse("N = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "N = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "just words\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "dt = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("mode = turbulent\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "noise.kind = pink\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "stop_on_eta = maybe\n"), ConfigError);
  CHECK_NOTHROW(parse("# comment\n" + kBase + "   # trailing comment\n"));
}

TEST_CASE("each admissibility condition has an accepted and a rejected instance") {
  struct Case {
    std::string good, bad, needle;
  };
  const Case inv[] = {
      {"r = 2.6\n", "r = 2.5\n", "r > 5/2"},
      {"M = 0.5\n", "M = 0.6\n", "M ≤ ρ/2"},
      {"ic.norm = 0.49\n", "ic.norm = 0.5\n", "ic.norm < M"},
      {"p = 2\n", "p = 1.5\n", "p >= 2"},
      {"C_cal = 0.1\n", "C_cal = 0\n", "C_cal > 0"},
      {"dt = 0.001\n", "dt = 0\n", "dt > 0"},
      {"physics.nu_h = 0\n", "physics.nu_h = 0.1\n", "ν_h = 0"},
      {"noise.m_W = 1\n", "noise.m_W = 0\n", "m_W"},
      {"ensemble_size = 1\n", "ensemble_size = 0\n", "ensemble_size"},
      {"physics.nu_z = 0\n", "physics.nu_z = 0.1\n", "ν_z = 0"},
      {"noise.kind = half_derivative\n", "noise.kind = vertical_transport\n", "vertical_transport"},
      {"forcing.tau0_f = 0.5\n", "forcing.tau0_f = 0.4\n", "tau0_f"},
      {"ic.kind = single_mode\n", "ic.kind = file\n", "ic.file"},
  };
  for (const auto& c : inv) {
    CAPTURE(c.bad);
    CHECK_NOTHROW(parse(with(kBase, c.good)));
    try {
      parse(with(kBase, c.bad));
      FAIL("accepted " << c.bad);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(c.needle) != std::string::npos);
    }
  }
  const Case vis[] = {
      {"physics.nu_z = 0.01\n", "physics.nu_z = 0\n", "ν_z > 0"},
      {"forcing.gamma_star = 0.025\n", "forcing.gamma_star = 0.02\n", "γ*"},
      {"noise.kind = vertical_transport\nnoise.amplitude = 0.5\n",
       "noise.kind = vertical_transport\nnoise.amplitude = 0.6\n", "δ²"},
  };
  for (const auto& c : vis) {
    CAPTURE(c.bad);
    CHECK_NOTHROW(parse(with(kVisc, c.good)));
    try {
      parse(with(kVisc, c.bad));
      FAIL("accepted " << c.bad);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(c.needle) != std::string::npos);
    }
  }
}

TEST_CASE("environment overrides") {
  setenv("GPE_NOISE_AMPLITUDE", "0.125", 1);
  setenv("GPE_N", "5", 1);
  const auto c = parse_config_text(kBase);
  CHECK(c.noise_amplitude == 0.125);
  CHECK(c.N == 5);
  CHECK(parse(kBase).N == 3);
  setenv("GPE_R", "2.0", 1);
  CHECK_THROWS_AS(parse_config_text(kBase), ConfigError);
  unsetenv("GPE_R");
  unsetenv("GPE_N");
  unsetenv("GPE_NOISE_AMPLITUDE");
}

TEST_CASE("with_overrides re-resolves") {
  const auto c = parse(kBase);
  const auto d = with_overrides(c, {{"N", "4"}, {"ic.norm", "0.1"}});
  CHECK(d.N == 4);
  CHECK(d.ic.norm == 0.1);
  CHECK_THROWS_AS(with_overrides(c, {{"bogus", "1"}}), ConfigError);
  CHECK_THROWS_AS(with_overrides(c, {{"r", "1"}}), ConfigError);
}

TEST_CASE("seeds are derived per trajectory and stream") {
  auto c = parse(kBase + "seed = 9\n");
  CHECK(trajectory_seed(c, 0) == derive_seed(9, 0));
  CHECK(trajectory_seed(c, 0) != trajectory_seed(c, 1));
  const auto s = trajectory_seed(c, 3);
  CHECK(noise_stream_seed(s) != ic_stream_seed(s));
  CHECK(noise_stream_seed(s) == derive_seed(s, 0));
}

TEST_CASE("initial conditions have the requested active norm and lie in D0") {
  for (const auto& text : {kBase, kVisc}) {
    const auto c = parse(text);
    for (int i = 0; i < 3; ++i) {
      const auto V = initial_condition(c, trajectory_seed(c, i));
      CHECK(active_norm(V, schedule_of(c), 0.0, c.r) == doctest::Approx(0.2).epsilon(1e-13));
      CHECK(d0_defect(V) < 1e-15);
    }
    CHECK(initial_condition(c, 1).at(1, 0, 1)[0] != initial_condition(c, 2).at(1, 0, 1)[0]);
  }
  const auto shared = parse(kBase + "ic.per_trajectory = false\n");
  CHECK(initial_condition(shared, 1).at(1, 0, 1)[0] == initial_condition(shared, 2).at(1, 0, 1)[0]);

  const auto sm = parse(kBase + "ic.kind = single_mode\nic.mode = 0,1,1\nic.component = 1,0\n");
  const auto V = initial_condition(sm, 0);
  CHECK(std::abs(V.at(0, 1, 1)[0]) > 0.0);
  CHECK(std::abs(V.at(0, 1, 1)[1]) == 0.0);
  // u along k' = (0, 1) with m3 = 0 is removed by the projection
  const auto bad = parse(kBase + "ic.kind = single_mode\nic.mode = 0,1,0\nic.component = 0,1\n");
  CHECK_THROWS_AS(initial_condition(bad, 0), ConfigError);
  const auto out = parse(kBase + "ic.kind = single_mode\nic.mode = 4,0,0\n");
  CHECK_THROWS_AS(initial_condition(out, 0), ConfigError);
}

TEST_CASE("file initial conditions") {
  const auto dir = std::filesystem::temp_directory_path() / "gpe_test_config";
  std::filesystem::create_directories(dir);
  const auto c = parse(kBase);
  const auto V0 = initial_condition(c, 5);
  write_snapshot(dir / "v0.bin", V0);
  const auto f = parse(kBase + "ic.kind = file\nic.file = " + (dir / "v0.bin").string() + "\n");
  const auto V = initial_condition(f, 0);
  CHECK(std::abs(V.at(1, 1, 1)[0] - V0.at(1, 1, 1)[0]) == 0.0);
  write_snapshot(dir / "big.bin", 10.0 * V0);
  const auto g = parse(kBase + "ic.kind = file\nic.file = " + (dir / "big.bin").string() + "\n");
  CHECK_THROWS_AS(initial_condition(g, 0), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("build_problem normalizes the forcing in the active norm") {
  const auto c = parse(kVisc + "forcing.kind = random_analytic\nforcing.amplitude = 0.3\n");
  const auto pb = build_problem(c);
  REQUIRE(!pb.physics.forcing.field.empty());
  CHECK(active_norm(pb.physics.forcing.field, pb.schedule, 0.0, c.r) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(d0_defect(pb.physics.forcing.field) < 1e-15);
  CHECK(build_problem(parse(kBase)).physics.forcing.field.empty());
}
