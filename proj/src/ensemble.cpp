#include "gpe/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "gpe/errors.hpp"
#include "gpe/snapshot.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) throw InvalidArgument("quantile: empty sample");
  std::sort(x.begin(), x.end());
  const double pos = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, x.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return w == 0.0 ? x[lo] : x[lo] + w * (x[hi] - x[lo]);
}

namespace {

std::string record_line(const StepRecord& r, int step) {
  std::string s = "{\"step\":" + std::to_string(step);
  const auto put = [&](const char* k, double v) { s += std::string(",\"") + k + "\":" + json_number(v); };
  put("t", r.t);
  put("tau", r.tau);
  put("gamma", r.gamma);
  put("l2", r.l2);
  put("gevrey", r.gevrey);
  put("seminorm", r.seminorm);
  put("theta", r.theta);
  put("dissipation_sq", r.dissipation_sq);
  s += std::string(",\"stopped\":") + (r.stopped ? "true" : "false") + "}\n";
  return s;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
  if (!os) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace

Trajectory simulate(const SimConfig& cfg, int i, const std::optional<fs::path>& dir) {
  const Problem pb = build_problem(cfg);
  const auto seed = trajectory_seed(cfg, i);
  const SpectralField V0 = initial_condition(cfg, seed);
  IntegratorOptions o;
  o.dt = cfg.dt;
  o.stop_on_eta = cfg.stop_on_eta;
  o.form = cfg.formulation;
  std::ofstream jl;
  std::vector<std::string> snaps;
  if (dir) {
    jl.open(*dir / ("traj_" + std::to_string(i) + ".jsonl"), std::ios::binary);
    if (!jl) throw std::runtime_error("cannot open trajectory stream for " + std::to_string(i));
  }
  Trajectory tr = simulate_problem(pb, V0, noise_stream_seed(seed), o,
                                   [&](const StepRecord& rec, const SpectralField& V, int step) {
                                     if (!dir) return;
                                     jl << record_line(rec, step);
                                     if (cfg.snapshot_cadence > 0 && step % cfg.snapshot_cadence == 0) {
                                       const std::string name =
                                           "snap_" + std::to_string(i) + "_" + std::to_string(step) + ".bin";
                                       write_snapshot(*dir / name, V);
                                       snaps.push_back(name);
                                     }
                                   });
  tr.seed = seed;
  tr.snapshots = std::move(snaps);
  if (dir) {
    jl << "{\"end\":true,\"stop_reason\":\"" << to_string(tr.stop_reason)
       << "\",\"eta\":" << (tr.eta ? json_number(*tr.eta) : "null") << ",\"seed\":" << seed << "}\n";
    jl.flush();
    if (!jl) throw std::runtime_error("write failed for trajectory " + std::to_string(i));
  }
  return tr;
}

EnsembleSummary summarize(const SimConfig& cfg, const std::vector<Trajectory>& trajs,
                          const std::vector<TrajectoryStatus>& status) {
  EnsembleSummary s;
  s.ensemble_size = static_cast<int>(trajs.size());
  s.trajectories = status;
  std::vector<const Trajectory*> ok;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    if (status[i].failed) {
      ++s.failed;
      continue;
    }
    ok.push_back(&trajs[i]);
    if (trajs[i].stop_reason == StopReason::stopping_time_eta) s.etas.push_back(*trajs[i].eta);
  }
  if (!ok.empty()) {
    std::size_t longest = 0;
    for (auto* t : ok) longest = std::max(longest, t->records.size());
    for (std::size_t n = 0; n < longest; ++n) {
      std::vector<double> v;
      double t = 0.0;
      for (auto* tr : ok) {
        if (n < tr->records.size()) {
          v.push_back(tr->records[n].gevrey);
          t = tr->records[n].t;
        }
      }
      s.quantiles.push_back({static_cast<int>(n), t, static_cast<int>(v.size()), quantile(v, 0.1), quantile(v, 0.5),
                             quantile(v, 0.9)});
    }
    std::vector<Trajectory> good;
    for (auto* t : ok) good.push_back(*t);
    s.fraction_eta = static_cast<double>(s.etas.size()) / static_cast<double>(ok.size());
    const auto nT = std::count_if(ok.begin(), ok.end(),
                                  [](const Trajectory* t) { return t->stop_reason == StopReason::horizon_T; });
    s.fraction_T = static_cast<double>(nT) / static_cast<double>(ok.size());
    s.energy = energy_budget(good, cfg.p, schedule_of(cfg).T_max);
  }
  return s;
}

EnsembleSummary run_ensemble(const SimConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  {
    ojson c;
    c["source"] = cfg.source_text;
    ojson r = ojson::object();
    for (const auto& [k, v] : cfg.resolved) r[k] = v;
    c["resolved"] = r;
    write_text(dir / "config.json", c.dump(2) + "\n");
  }
  const int n = cfg.ensemble_size;
  std::vector<Trajectory> trajs(static_cast<std::size_t>(n));
  std::vector<TrajectoryStatus> status(static_cast<std::size_t>(n));
  parallel_for(n, cfg.workers, [&](int i) {
    auto& st = status[static_cast<std::size_t>(i)];
    st.index = i;
    st.seed = trajectory_seed(cfg, i);
    try {
      trajs[static_cast<std::size_t>(i)] = simulate(cfg, i, dir);
      const auto& tr = trajs[static_cast<std::size_t>(i)];
      st.stop_reason = to_string(tr.stop_reason);
      st.eta = tr.eta;
      st.steps = static_cast<int>(tr.records.size()) - 1;
    } catch (const std::exception& e) {
      st.failed = true;
      st.error = e.what();
    }
  });
  EnsembleSummary s = summarize(cfg, trajs, status);

  ojson j;
  j["ensemble_size"] = s.ensemble_size;
  j["master_seed"] = cfg.master_seed;
  j["failed"] = s.failed;
  j["fraction_stopped_eta"] = s.fraction_eta;
  j["fraction_horizon_T"] = s.fraction_T;
  j["T"] = schedule_of(cfg).T_max;
  j["eta"] = s.etas;
  if (!s.etas.empty()) j["eta_median"] = quantile(s.etas, 0.5);
  if (s.energy) {
    j["energy_budget"] = {{"trajectories", s.energy->trajectories}, {"p", s.energy->p},
                          {"T", s.energy->T},  {"mean_budget", s.energy->mean_budget},
                          {"mean_initial", s.energy->mean_initial}, {"C_emp", s.energy->C_emp}};
  }
  ojson tl = ojson::array();
  for (const auto& st : s.trajectories) {
    ojson e;
    e["index"] = st.index;
    e["seed"] = st.seed;
    e["failed"] = st.failed;
    if (st.failed) {
      e["error"] = st.error;
    } else {
      e["stop_reason"] = st.stop_reason;
      e["eta"] = st.eta ? ojson(*st.eta) : ojson(nullptr);
      e["steps"] = st.steps;
    }
    tl.push_back(e);
  }
  j["trajectories"] = tl;
  j["quantiles_csv"] = "summary.csv";
  write_text(dir / "summary.json", j.dump(2) + "\n");

  std::string csv = "step,t,alive,q10,q50,q90\n";
  for (const auto& q : s.quantiles) {
    csv += std::to_string(q.step) + "," + json_number(q.t) + "," + std::to_string(q.alive) + "," +
           json_number(q.q10) + "," + json_number(q.q50) + "," + json_number(q.q90) + "\n";
  }
  write_text(dir / "summary.csv", csv);
  return s;
}

}  // namespace gpe
