#include "gpe/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gpe/ensemble.hpp"
#include "gpe/errors.hpp"
#include "gpe/verifier.hpp"

namespace gpe {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<int> int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      item = trim(item);
      out.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("suite key '" + key + "': expected a comma-separated integer list");
    }
  }
  if (out.empty()) throw ConfigError("suite key '" + key + "': empty list");
  return out;
}

double num(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("suite key '" + key + "': expected a number, got '" + v + "'");
}

int integer(const std::string& key, const std::string& v) {
  const double x = num(key, v);
  if (x != std::floor(x)) throw ConfigError("suite key '" + key + "': expected an integer");
  return static_cast<int>(x);
}

std::string fmt(double x) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

}  // namespace

SuiteOptions parse_suite_text(const std::string& text) {
  SuiteOptions o;
  std::istringstream is(text);
  std::string line;
  std::map<std::string, bool> seen;
  while (std::getline(is, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("suite: expected 'key = value' in '" + line + "'");
    const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (seen[k]) throw ConfigError("suite: duplicate key '" + k + "'");
    seen[k] = true;
    if (k == "output_dir") o.output_dir = v;
    else if (k == "checks") {
      o.checks.clear();
      std::stringstream ss(v);
      std::string c;
      while (std::getline(ss, c, ',')) {
        c = trim(c);
        if (c != "all" && !c.empty()) o.checks.push_back(c);
      }
    } else if (k == "samples") o.samples = integer(k, v);
    else if (k == "orders") o.orders = int_list(k, v);
    else if (k == "r") o.r = num(k, v);
    else if (k == "tau") o.tau = num(k, v);
    else if (k == "gamma") o.gamma = num(k, v);
    else if (k == "sandwich_samples") o.sandwich_samples = integer(k, v);
    else if (k == "poincare_samples") o.poincare_samples = integer(k, v);
    else if (k == "orthogonality_samples") o.orthogonality_samples = integer(k, v);
    else if (k == "q_samples") o.q_samples = integer(k, v);
    else if (k == "uniqueness_seeds") o.uniqueness_seeds = integer(k, v);
    else if (k == "consistency_configs") o.consistency_configs = integer(k, v);
    else if (k == "convergence_levels") o.convergence_levels = int_list(k, v);
    else if (k == "seed") o.seed = static_cast<std::uint64_t>(std::stoull(v));
    else if (k == "workers") o.workers = integer(k, v);
    else if (k == "inject_fault") {
      if (v != "none" && v != "cutoff") throw ConfigError("suite key 'inject_fault': expected none or cutoff");
      o.inject_fault = v;
    } else {
      throw ConfigError("suite: unknown key '" + k + "'");
    }
  }
  return o;
}

SuiteOptions parse_suite(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open suite file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_suite_text(ss.str());
}

SimConfig standard_config(Regime mode, NoiseKind noise, int N, std::uint64_t seed, double f0, int steps,
                          double noise_amplitude) {
  std::string t;
  t += std::string("mode = ") + (mode == Regime::inviscid ? "inviscid" : "viscous") + "\n";
  t += "N = " + std::to_string(N) + "\n";
  t += "tau0 = 0.5\nrho = 1\nM = 0.5\nr = 3\nC_cal = 0.5\n";
  if (mode == Regime::viscous) t += "physics.nu_z = 0.5\n";
  t += "physics.f0 = " + fmt(f0) + "\n";
  t += std::string("noise.kind = ") + to_string(noise) + "\n";
  t += "noise.amplitude = " + fmt(noise == NoiseKind::none ? 0.0 : noise_amplitude) + "\n";
  t += "ic.norm = 0.2\n";
  t += "seed = " + std::to_string(seed) + "\n";
  SimConfig c = parse_config_text(t, false);
  const double T = schedule_of(c).T_max;
  t += "dt = " + fmt(T / steps) + "\n";
  return parse_config_text(t, false);
}

SimConfig consistency_config(int k, int N) {
  static const NoiseKind kinds[] = {NoiseKind::none, NoiseKind::additive, NoiseKind::multiplicative,
                                    NoiseKind::half_derivative, NoiseKind::vertical_transport};
  const Regime mode = k % 2 == 0 ? Regime::inviscid : Regime::viscous;
  NoiseKind nk = kinds[(k / 2) % 5];
  if (mode == Regime::inviscid && nk == NoiseKind::vertical_transport) nk = NoiseKind::multiplicative;
  const double f0 = 0.5 * (k % 3);
  return standard_config(mode, nk, N, static_cast<std::uint64_t>(k) + 1, f0, 40);
}

SuiteResult run_suite(const SuiteOptions& opt) {
  SuiteResult res;
  const auto enabled = [&](const std::string& name) {
    return opt.checks.empty() || std::find(opt.checks.begin(), opt.checks.end(), name) != opt.checks.end();
  };
  const auto add = [&](SuiteRow row) {
    if (row.hard && !row.pass) res.hard_failure = true;
    res.rows.push_back(std::move(row));
  };

  if (enabled("cutoff")) {
    const CutoffSpec cs{1.0};
    std::function<double(double)> theta = [&](double x) { return cutoff_theta(x, cs); };
    if (opt.inject_fault == "cutoff") theta = [](double x) { return std::exp(-x); };
    const auto r = cutoff_check(theta, cs.rho);
    add({"cutoff", 0, 4001, r.pass ? 0.0 : 1.0, r.pass, true, r.detail});
  }
  if (enabled("orthogonality")) {
    for (int N : {4, 8}) {
      const auto r = energy_orthogonality(N, opt.orthogonality_samples, opt.seed, QMethod::pseudospectral);
      add({"orthogonality", N, r.samples, r.worst, r.worst <= 1e-10, true, "max |<Q(V,V),V>| / (||V||_{0,2}^2 ||V||)"});
    }
  }
  if (enabled("q_equivalence")) {
    const auto r = q_equivalence(4, opt.q_samples, opt.seed);
    add({"q_equivalence", 4, r.samples, r.worst_abs, r.worst_abs <= 1e-10, false, "max |Q_pseudospectral - Q_direct|"});
  }
  if (enabled("sandwich")) {
    const GevreyParams p{0.3, 3.0, 0.2, 3.0};
    for (auto fam : {NormFamily::isotropic, NormFamily::anisotropic}) {
      const auto r = sandwich_check(fam, 6, opt.sandwich_samples, p, opt.seed);
      const std::string tag = fam == NormFamily::isotropic ? "iso" : "aniso";
      add({"sandwich_upper_" + tag, 6, r.samples, r.worst_upper, r.upper_pass, true, "||f||^2_full / 2(||f||^2 + |A^r e f|^2)"});
      if (fam == NormFamily::isotropic) {
        add({"sandwich_lower_iso", 6, r.samples, r.worst_lower, r.lower_pass, true, "(||f||^2 + |A^r e f|^2) / ||f||^2_full"});
      } else {
        add({"sandwich_lower_aniso_corrected", 6, r.samples, r.worst_lower_corrected,
             r.worst_lower_corrected <= 1.0 + 1e-12, true, "(||f||^2 + 2^{1-r} |A^r e f|^2) / ||f||^2_full"});
        add({"sandwich_lower_aniso_literal", 6, r.samples, r.worst_lower, r.lower_pass, false,
             "literal A^r; exceeds 1 up to 2^{r-1} since |k|^{2r} >= |k'|^{2r} + |k3|^{2r}"});
      }
    }
  }
  if (enabled("poincare")) {
    const auto r = poincare_sweep(6, {1, 2, 4}, opt.poincare_samples, opt.seed);
    add({"poincare", 6, r.samples, r.worst_ratio, r.failures == 0, true, std::to_string(r.failures) + " failures"});
  }
  if (enabled("estimates")) {
    SamplingSpec s;
    s.samples = opt.samples;
    s.r = opt.r;
    s.tau = opt.tau;
    s.gamma = opt.gamma;
    s.mu = opt.tau + 0.2;
    s.q = opt.r + 1.0;
    s.seed = opt.seed;
    s.workers = opt.workers;
    for (auto k : {EstimateKind::trilinear_iso, EstimateKind::trilinear_aniso, EstimateKind::product_iso,
                   EstimateKind::product_aniso, EstimateKind::product_iso_seminorm,
                   EstimateKind::product_aniso_seminorm}) {
      for (const auto& r : sample_estimate(k, opt.orders, s))
        add({r.name, r.N, r.samples, r.worst_ratio, r.pass, false, "sampled sup"});
    }
    const double d = trilinear_scaling_defect(opt.orders.front(), s, {1e-3, 0.37, 2.0, 1e3});
    add({"trilinear_iso_scaling", opt.orders.front(), s.samples, d, d <= 1e-12, false, "homogeneity defect"});
  }
  if (enabled("uniqueness")) {
    for (auto mode : {Regime::inviscid, Regime::viscous}) {
      double worst = 0.0, distinct = std::numeric_limits<double>::infinity();
      for (int s = 0; s < opt.uniqueness_seeds; ++s) {
        const SimConfig c = standard_config(mode, NoiseKind::multiplicative, 4, opt.seed + s, 0.0, 50);
        const auto u = uniqueness_experiment(c, trajectory_seed(c, 0), 1e-6);
        worst = std::max(worst, u.sup_diff_equal_ic);
        distinct = std::min(distinct, u.sup_diff_distinct_ic);
      }
      const std::string tag = mode == Regime::inviscid ? "inviscid" : "viscous";
      add({"uniqueness_equal_ic_" + tag, 4, opt.uniqueness_seeds, worst, worst == 0.0, true, "sup diff, equal initial data"});
      add({"uniqueness_distinct_ic_" + tag, 4, opt.uniqueness_seeds, distinct, distinct > 0.0, false,
           "min over seeds of sup diff, eps = 1e-6"});
    }
  }
  if (enabled("consistency")) {
    double worst = 0.0;
    int fails = 0;
    for (int k = 0; k < opt.consistency_configs; ++k) {
      const SimConfig c = consistency_config(k, 4);
      const auto rep = formulation_consistency(build_problem(c), initial_condition(c, trajectory_seed(c, 0)), c.dt,
                                               schedule_of(c).T_max, trajectory_seed(c, 0));
      worst = std::max(worst, std::abs(rep.ratio - 0.5));
      if (!rep.pass) ++fails;
    }
    add({"formulation_consistency", 4, opt.consistency_configs, worst, fails == 0, true,
         std::to_string(fails) + " configs outside err(dt/2)/err(dt) in [0.35, 0.65]"});
  }
  if (enabled("convergence")) {
    const SimConfig c = standard_config(Regime::inviscid, NoiseKind::none, opt.convergence_levels.front(), opt.seed, 0.0, 50);
    const auto rows = galerkin_convergence(c, opt.convergence_levels);
    bool mono = true;
    for (std::size_t j = 1; j + 1 < rows.size(); ++j) mono = mono && rows[j].sup_diff <= rows[j - 1].sup_diff;
    for (const auto& r : rows)
      add({"galerkin_convergence", r.N, r.steps, r.sup_diff, mono, false, "sup_t ||V_N - V_Nmax||"});
  }
  return res;
}

int run_verifier_suite(const SuiteOptions& opt) {
  const SuiteResult res = run_suite(opt);
  const fs::path dir(opt.output_dir);
  fs::create_directories(dir);
  nlohmann::ordered_json j;
  j["hard_failure"] = res.hard_failure;
  j["inject_fault"] = opt.inject_fault;
  auto arr = nlohmann::ordered_json::array();
  std::string csv = "name,N,samples,worst_ratio,pass\n";
  for (const auto& r : res.rows) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["N"] = r.N;
    e["samples"] = r.samples;
    e["worst_ratio"] = std::isfinite(r.worst_ratio) ? nlohmann::ordered_json(r.worst_ratio) : nullptr;
    e["pass"] = r.pass;
    e["hard"] = r.hard;
    e["detail"] = r.detail;
    arr.push_back(e);
    csv += r.name + "," + std::to_string(r.N) + "," + std::to_string(r.samples) + "," + json_number(r.worst_ratio) +
           "," + (r.pass ? "true" : "false") + "\n";
  }
  j["checks"] = arr;
  std::ofstream(dir / "report.json", std::ios::binary) << j.dump(2) << "\n";
  std::ofstream(dir / "report.csv", std::ios::binary) << csv;
  return res.hard_failure ? 1 : 0;
}

}  // namespace gpe
