#include "gpe/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gpe/errors.hpp"
#include "gpe/random_field.hpp"
#include "gpe/snapshot.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"mode", "", "inviscid | viscous"},
      {"N", "6", "Galerkin order: modes |m| <= N"},
      {"dt", "auto", "time step; auto: |dtau/dt| dt <= 1e-3 tau0 and c^2 dt <= 1e-3"},
      {"tau0", "1.0", "initial analyticity radius"},
      {"rho", "2.0", "cutoff radius"},
      {"M", "1.0", "bound on the initial active norm"},
      {"r", "3.0", "Sobolev exponent, r > 5/2"},
      {"p", "4.0", "moment exponent of the energy budget"},
      {"C_cal", "auto", "calibration constant of the radius schedule"},
      {"formulation", "V_form", "V_form | U_form"},
      {"q_method", "pseudospectral", "pseudospectral | direct"},
      {"physics.f0", "0.0", "Coriolis parameter"},
      {"physics.nu_z", "0.0", "vertical viscosity (> 0 in viscous mode)"},
      {"physics.nu_h", "0.0", "horizontal viscosity (must be 0)"},
      {"forcing.kind", "none", "none | random_analytic"},
      {"forcing.amplitude", "0.0", "active norm of f at t = 0"},
      {"forcing.tau0_f", "auto", "horizontal radius of f; auto: tau0 + 0.5"},
      {"forcing.gamma_star", "auto", "vertical radius of f; auto: nu_z tau0 / 4"},
      {"forcing.seed", "7", "seed of the forcing field"},
      {"noise.kind", "none", "none | additive | multiplicative | half_derivative | vertical_transport"},
      {"noise.m_W", "16", "number of Brownian motions"},
      {"noise.amplitude", "0.0", "c with sum alpha_k^2 = c^2"},
      {"noise.seed", "11", "seed of the additive noise fields g_k"},
      {"ic.kind", "random_analytic", "random_analytic | single_mode | file"},
      {"ic.norm", "auto", "active norm of V0 at t = 0 (< M); auto: M / 2"},
      {"ic.mode", "1,0,1", "single_mode: mode index m1,m2,m3"},
      {"ic.component", "1,0", "single_mode: real amplitudes of (u, v) before scaling"},
      {"ic.mu", "auto", "random_analytic: horizontal decay; auto: tau0 + 0.5"},
      {"ic.mu_z", "auto", "random_analytic: vertical decay; auto: ic.mu"},
      {"ic.q", "auto", "random_analytic: algebraic decay; auto: r + 2"},
      {"ic.file", "", "file: snapshot path"},
      {"ic.per_trajectory", "true", "random_analytic: draw V0 per trajectory"},
      {"seed", "0", "master seed"},
      {"ensemble_size", "1", "number of trajectories"},
      {"snapshot_cadence", "0", "write a snapshot every k steps (0: never)"},
      {"output_dir", "gpe_out", "output directory"},
      {"workers", "0", "worker threads (0: hardware concurrency)"},
      {"stop_on_eta", "true", "stop at the stopping time eta"},
  };
  return schema;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected a finite number, got '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long x = std::stoull(v, &pos);
      if (pos == v.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': expected an unsigned 64-bit integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::string env_name(const std::string& key) {
  std::string n = kEnvPrefix;
  for (char c : key) n += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return n;
}

bool known_key(const std::string& k) {
  const auto& s = config_schema();
  return std::any_of(s.begin(), s.end(), [&](const ConfigKey& c) { return c.key == k; });
}

std::map<std::string, std::string> read_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string k = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (!known_key(k)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + k + "'");
    if (kv.count(k)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + k + "'");
    kv[k] = v;
  }
  return kv;
}

SimConfig resolve(const std::map<std::string, std::string>& kv, const std::string& source) {
  SimConfig c;
  c.source_text = source;
  std::map<std::string, std::string> v;
  for (const auto& k : config_schema()) {
    auto it = kv.find(k.key);
    if (it != kv.end()) {
      v[k.key] = it->second;
    } else if (k.default_value.empty() && k.key == "mode") {
      throw ConfigError("missing required key 'mode'");
    } else {
      v[k.key] = k.default_value;
    }
  }
  const auto num = [&](const std::string& k) { return to_double(k, v[k]); };
  const auto is_auto = [&](const std::string& k) { return v[k] == "auto"; };

  if (v["mode"] == "inviscid") c.mode = Regime::inviscid;
  else if (v["mode"] == "viscous") c.mode = Regime::viscous;
  else throw ConfigError("key 'mode': expected inviscid or viscous, got '" + v["mode"] + "'");
  c.N = static_cast<int>(to_int("N", v["N"]));
  c.tau0 = num("tau0");
  c.rho = num("rho");
  c.M = num("M");
  c.r = num("r");
  c.p = num("p");
  c.C_cal = is_auto("C_cal") ? kDefaultCcal : num("C_cal");
  if (v["formulation"] == "V_form") c.formulation = Formulation::V_form;
  else if (v["formulation"] == "U_form") c.formulation = Formulation::U_form;
  else throw ConfigError("key 'formulation': expected V_form or U_form");
  if (v["q_method"] == "pseudospectral") c.q_method = QMethod::pseudospectral;
  else if (v["q_method"] == "direct") c.q_method = QMethod::direct;
  else throw ConfigError("key 'q_method': expected pseudospectral or direct");
  c.f0 = num("physics.f0");
  c.nu_z = num("physics.nu_z");
  c.nu_h = num("physics.nu_h");
  c.forcing_kind = v["forcing.kind"];
  if (c.forcing_kind != "none" && c.forcing_kind != "random_analytic")
    throw ConfigError("key 'forcing.kind': expected none or random_analytic");
  c.forcing_amplitude = num("forcing.amplitude");
  c.forcing_tau0_f = is_auto("forcing.tau0_f") ? c.tau0 + 0.5 : num("forcing.tau0_f");
  c.forcing_gamma_star = is_auto("forcing.gamma_star") ? c.nu_z * c.tau0 / 4.0 : num("forcing.gamma_star");
  c.forcing_seed = to_u64("forcing.seed", v["forcing.seed"]);
  c.noise_kind = noise_kind_from_string(v["noise.kind"]);
  c.m_W = static_cast<int>(to_int("noise.m_W", v["noise.m_W"]));
  c.noise_amplitude = num("noise.amplitude");
  c.noise_seed = to_u64("noise.seed", v["noise.seed"]);
  c.ic.kind = v["ic.kind"];
  if (c.ic.kind != "random_analytic" && c.ic.kind != "single_mode" && c.ic.kind != "file")
    throw ConfigError("key 'ic.kind': expected random_analytic, single_mode or file");
  c.ic.norm = is_auto("ic.norm") ? 0.5 * c.M : num("ic.norm");
  {
    const auto parts = split(v["ic.mode"], ',');
    if (parts.size() != 3) throw ConfigError("key 'ic.mode': expected m1,m2,m3");
    for (int i = 0; i < 3; ++i) c.ic.mode[i] = static_cast<int>(to_int("ic.mode", parts[i]));
    const auto comp = split(v["ic.component"], ',');
    if (comp.size() != 2) throw ConfigError("key 'ic.component': expected u,v");
    for (int i = 0; i < 2; ++i) c.ic.component[i] = to_double("ic.component", comp[i]);
  }
  c.ic.mu = is_auto("ic.mu") ? c.tau0 + 0.5 : num("ic.mu");
  c.ic.mu_z = is_auto("ic.mu_z") ? c.ic.mu : num("ic.mu_z");
  c.ic.q = is_auto("ic.q") ? c.r + 2.0 : num("ic.q");
  c.ic.file = v["ic.file"];
  c.ic.per_trajectory = to_bool("ic.per_trajectory", v["ic.per_trajectory"]);
  c.master_seed = to_u64("seed", v["seed"]);
  c.ensemble_size = static_cast<int>(to_int("ensemble_size", v["ensemble_size"]));
  c.snapshot_cadence = static_cast<int>(to_int("snapshot_cadence", v["snapshot_cadence"]));
  c.output_dir = v["output_dir"];
  c.workers = static_cast<int>(to_int("workers", v["workers"]));
  c.stop_on_eta = to_bool("stop_on_eta", v["stop_on_eta"]);

  if (is_auto("dt")) {
    if (c.tau0 > 0 && c.rho > 0 && c.C_cal > 0) {
      const auto s = radius_schedule(c.mode, c.tau0, c.rho, c.C_cal, c.p, c.r, c.nu_z);
      c.dt = 1e-3 * c.tau0 / s.tau_rate();
      const double c2 = c.noise_amplitude * c.noise_amplitude;
      if (c2 > 0) c.dt = std::min(c.dt, 1e-3 / c2);
    } else {
      c.dt = 0.0;
    }
  } else {
    c.dt = num("dt");
  }

  const auto put = [&](const std::string& k, const std::string& val) { c.resolved.emplace_back(k, val); };
  for (const auto& k : config_schema()) {
    const std::string& key = k.key;
    if (!is_auto(key)) {
      put(key, v[key]);
      continue;
    }
    double x = 0;
    if (key == "dt") x = c.dt;
    else if (key == "C_cal") x = c.C_cal;
    else if (key == "forcing.tau0_f") x = c.forcing_tau0_f;
    else if (key == "forcing.gamma_star") x = c.forcing_gamma_star;
    else if (key == "ic.norm") x = c.ic.norm;
    else if (key == "ic.mu") x = c.ic.mu;
    else if (key == "ic.mu_z") x = c.ic.mu_z;
    else if (key == "ic.q") x = c.ic.q;
    put(key, fmt17(x));
  }
  return c;
}

void apply_env(std::map<std::string, std::string>& kv) {
  for (const auto& k : config_schema()) {
    if (const char* e = std::getenv(env_name(k.key).c_str())) kv[k.key] = trim(e);
  }
}

}  // namespace

SimConfig parse_config_text(const std::string& text, bool env) {
  auto kv = read_kv(text);
  if (env) apply_env(kv);
  SimConfig c = resolve(kv, text);
  validate(c);
  return c;
}

SimConfig parse_config(const std::filesystem::path& path, bool env) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), env);
}

SimConfig with_overrides(const SimConfig& cfg, const std::map<std::string, std::string>& over) {
  auto kv = read_kv(cfg.source_text);
  for (const auto& [k, v] : over) {
    if (!known_key(k)) throw ConfigError("unknown key '" + k + "'");
    kv[k] = v;
  }
  SimConfig c = resolve(kv, cfg.source_text);
  validate(c);
  return c;
}

void validate(const SimConfig& c) {
  const auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (c.N < 1) fail("N must be >= 1");
  if (!(c.r > 2.5)) fail("r > 5/2 is required, got r = " + fmt17(c.r));
  if (!(c.tau0 > 0)) fail("tau0 > 0 is required");
  if (!(c.rho > 0)) fail("rho > 0 is required");
  if (!(c.M > 0)) fail("M > 0 is required");
  if (c.rho < c.M) fail("ρ ≥ M is required, got rho = " + fmt17(c.rho) + " < M = " + fmt17(c.M));
  if (c.M > 0.5 * c.rho) fail("M ≤ ρ/2 is required so that the stopping time η > 0");
  if (!(c.ic.norm >= 0) || !(c.ic.norm < c.M)) fail("initial data must satisfy ||V0|| < M (ic.norm < M)");
  if (!(c.p >= 2)) fail("p >= 2 is required");
  if (!(c.C_cal > 0)) fail("C_cal > 0 is required");
  if (!(c.dt > 0)) fail("dt > 0 is required");
  if (c.nu_h != 0.0) fail("ν_h = 0 is required (hydrostatic Euler / vertically viscous system)");
  if (c.m_W < 1) fail("noise.m_W >= 1 is required");
  if (c.noise_amplitude < 0) fail("noise.amplitude >= 0 is required");
  if (c.ensemble_size < 1) fail("ensemble_size >= 1 is required");
  if (c.snapshot_cadence < 0) fail("snapshot_cadence >= 0 is required");
  if (c.ic.kind == "file" && c.ic.file.empty()) fail("ic.kind = file requires ic.file");
  if (c.mode == Regime::inviscid) {
    if (c.nu_z != 0.0) fail("inviscid mode requires ν_z = 0");
    if (c.noise_kind == NoiseKind::vertical_transport)
      fail("inviscid mode forbids vertical_transport noise (transport noise needs vertical viscosity)");
    if (c.forcing_tau0_f < c.tau0) fail("inviscid forcing must lie in D_{τ0,r}: forcing.tau0_f ≥ tau0 is required");
  } else {
    if (!(c.nu_z > 0)) fail("viscous mode requires ν_z > 0");
    if (c.forcing_gamma_star < c.nu_z * c.tau0 / 8.0) fail("viscous forcing requires γ* ≥ ν_z τ0/8");
    if (c.forcing_tau0_f < c.tau0) fail("viscous forcing must lie in D_{τ0,r,γ*,r}: forcing.tau0_f ≥ tau0 is required");
    if (c.noise_kind == NoiseKind::vertical_transport) {
      const double delta2 = c.noise_amplitude * c.noise_amplitude;
      if (delta2 > c.p * c.nu_z / (8.0 * c.C_cal))
        fail("vertical_transport noise requires δ² ≤ p ν_z / (8 C_p), got δ² = " + fmt17(delta2));
    }
  }
}

RadiusSchedule schedule_of(const SimConfig& c) {
  return radius_schedule(c.mode, c.tau0, c.rho, c.C_cal, c.p, c.r, c.nu_z);
}

Problem build_problem(const SimConfig& c) {
  Problem pb;
  pb.mode = c.mode;
  pb.r = c.r;
  pb.physics.f0 = c.f0;
  pb.physics.nu_z = c.nu_z;
  pb.physics.nu_h = c.nu_h;
  pb.physics.forcing.tau0_f = c.forcing_tau0_f;
  pb.physics.forcing.gamma_star = c.forcing_gamma_star;
  pb.cutoff.rho = c.rho;
  pb.schedule = schedule_of(c);
  pb.q_method = c.q_method;
  if (c.forcing_kind == "random_analytic" && c.forcing_amplitude > 0) {
    Rng rng(c.forcing_seed);
    RandomFieldSpec spec;
    spec.mu = c.forcing_tau0_f;
    spec.mu_z = c.mode == Regime::viscous ? c.forcing_gamma_star : c.forcing_tau0_f;
    spec.q = c.r + 2.0;
    SpectralField f = random_field(c.N, spec, rng);
    const double n = active_norm(f, pb.schedule, 0.0, c.r);
    if (n > 0) f *= c.forcing_amplitude / n;
    pb.physics.forcing.field = std::move(f);
  }
  pb.noise = make_noise_model(c.noise_kind, c.m_W, c.noise_amplitude, c.N, c.r, c.tau0 + 0.5, c.tau0,
                              c.noise_seed);
  return pb;
}

std::uint64_t trajectory_seed(const SimConfig& c, int i) {
  return derive_seed(c.master_seed, static_cast<std::uint64_t>(i));
}
std::uint64_t noise_stream_seed(std::uint64_t s) { return derive_seed(s, 0); }
std::uint64_t ic_stream_seed(std::uint64_t s) { return derive_seed(s, 1); }

SpectralField initial_condition(const SimConfig& c, std::uint64_t traj_seed, int N) {
  if (N < 0) N = c.N;
  const auto sched = schedule_of(c);
  SpectralField V;
  if (c.ic.kind == "single_mode") {
    V = SpectralField(N);
    const ModeIndex m{c.ic.mode[0], c.ic.mode[1], c.ic.mode[2]};
    if (m.m3 < 0 || V.modes().find(m) < 0) throw ConfigError("ic.mode lies outside the truncation |m| <= N");
    V.set_mode(m, c.ic.component[0], c.ic.component[1]);
    V = project_D0(V);
  } else if (c.ic.kind == "random_analytic") {
    Rng rng(c.ic.per_trajectory ? ic_stream_seed(traj_seed) : ic_stream_seed(derive_seed(c.master_seed, ~0ULL)));
    RandomFieldSpec spec;
    spec.mu = c.ic.mu;
    spec.mu_z = c.ic.mu_z;
    spec.q = c.ic.q;
    V = random_field(N, spec, rng);
  } else {
    V = project_D0(embed(read_snapshot(c.ic.file), N));
    const double n = active_norm(V, sched, 0.0, c.r);
    if (!(n < c.M)) throw ConfigError("initial data from file violates ||V0|| < M");
    return V;
  }
  const double n = active_norm(V, sched, 0.0, c.r);
  if (n == 0.0) {
    if (c.ic.norm == 0.0) return V;
    throw ConfigError("initial condition vanishes after projection onto D0");
  }
  V *= c.ic.norm / n;
  return V;
}

}  // namespace gpe
