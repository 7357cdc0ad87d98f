#include "gpe/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gpe/errors.hpp"
#include "gpe/random_field.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  if (n <= 0) return;
  int w = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  w = std::min(w, n);
  if (w == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

namespace {

double safe_ratio(double lhs, double rhs) {
  if (rhs == 0.0) {
    if (lhs == 0.0) return 0.0;
    throw ContractViolation("estimate: nonzero left side over vanishing right side");
  }
  return lhs / rhs;
}

SpectralField first_component(const SpectralField& f) {
  SpectralField out = f;
  for (auto& c : out.data()) c[1] = 0.0;
  return out;
}

Problem problem_at(const Problem& base, int N) {
  Problem pb = base;
  if (!pb.physics.forcing.field.empty()) pb.physics.forcing.field = embed(pb.physics.forcing.field, N);
  pb.noise = base.noise.embedded(N);
  return pb;
}

IntegratorOptions options_of(const SimConfig& cfg) {
  IntegratorOptions o;
  o.dt = cfg.dt;
  o.stop_on_eta = cfg.stop_on_eta;
  o.form = cfg.formulation;
  return o;
}

struct LinFit {
  double slope = 0.0;
  double r2 = 1.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  LinFit out;
  if (x.size() < 2) return out;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return out;
  out.slope = sxy / sxx;
  if (syy == 0.0) return out;
  double ssr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + out.slope * (x[i] - mx));
    ssr += e * e;
  }
  out.r2 = 1.0 - ssr / syy;
  return out;
}

}  // namespace

double trilinear_iso_ratio(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                           double tau, double r) {
  if (!(r > 2.0)) throw InvalidArgument("trilinear_iso_ratio: r > 2 required");
  const auto Ar = SpectralMultiplier::power(r);
  const auto Ar2 = SpectralMultiplier::power(r + 0.5);
  const auto e = SpectralMultiplier::exp_iso(tau);
  const double lhs = std::abs(multiplier_inner(nonlinear_Q(f, g, QMethod::direct), h, {Ar, e}));
  const GevreyParams p{tau, r, 0.0, r};
  const auto full = [&](const SpectralField& x) { return norm(x, p, NormFamily::isotropic, NormKind::full); };
  const auto half = [&](const SpectralField& x) { return multiplier_norm(x, {Ar2, e}); };
  const double hf = half(f), hg = half(g), hh = half(h);
  const double rhs = full(f) * hg * hh + full(g) * hf * hh + full(h) * hf * hg;
  return safe_ratio(lhs, rhs);
}

double trilinear_aniso_ratio(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                             double tau, double gamma, double r) {
  if (!(r > 2.0)) throw InvalidArgument("trilinear_aniso_ratio: r > 2 required");
  const auto Ar = SpectralMultiplier::power(r);
  const auto e = SpectralMultiplier::exp_aniso(tau, gamma);
  const auto Ah = SpectralMultiplier::power_h(0.5);
  const auto Az = SpectralMultiplier::power_z(1.0);
  const double lhs = std::abs(multiplier_inner(nonlinear_Q(f, g, QMethod::direct), h, {Ar, e}));
  const GevreyParams p{tau, r, gamma, r};
  const auto full = [&](const SpectralField& x) { return norm(x, p, NormFamily::anisotropic, NormKind::full); };
  const auto hs = [&](const SpectralField& x) { return multiplier_norm(x, {Ah, Ar, e}); };
  const auto zs = [&](const SpectralField& x) { return multiplier_norm(x, {Az, Ar, e}); };
  const double hf = hs(f), hg = hs(g), hh = hs(h);
  double rhs = full(f) * hg * hh + full(g) * hf * hh + full(h) * hf * hg;
  rhs += multiplier_norm(f, {Ar, e}) * (hg * zs(h) + zs(g) * hh);
  return safe_ratio(lhs, rhs);
}

double product_ratio(const SpectralField& f, const SpectralField& g, const GevreyParams& p, NormFamily family,
                     bool seminorm) {
  const SpectralField fs = first_component(f), gs = first_component(g);
  const SpectralField fg = scalar_product(f, g);
  if (!seminorm) {
    return safe_ratio(norm(fg, p, family, NormKind::full), norm(fs, p, family, NormKind::full) *
                                                               norm(gs, p, family, NormKind::full));
  }
  const auto zero = [](const SpectralField& x) {
    const auto i = x.modes().find(0, 0, 0);
    return std::abs(x[static_cast<std::size_t>(i)][0]);
  };
  const double lf = zero(fs) + norm(fs, p, family, NormKind::seminorm);
  const double lg = zero(gs) + norm(gs, p, family, NormKind::seminorm);
  return safe_ratio(norm(fg, p, family, NormKind::seminorm), lf * lg);
}

const char* to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::trilinear_iso: return "trilinear_iso";
    case EstimateKind::trilinear_aniso: return "trilinear_aniso";
    case EstimateKind::product_iso: return "product_iso";
    case EstimateKind::product_aniso: return "product_aniso";
    case EstimateKind::product_iso_seminorm: return "product_iso_seminorm";
    case EstimateKind::product_aniso_seminorm: return "product_aniso_seminorm";
  }
  return "";
}

std::vector<InequalityReport> sample_estimate(EstimateKind kind, const std::vector<int>& Ns,
                                              const SamplingSpec& spec) {
  if (Ns.empty()) throw InvalidArgument("sample_estimate: no orders");
  if (spec.samples < 1) throw InvalidArgument("sample_estimate: samples >= 1 required");
  const int Nmax = *std::max_element(Ns.begin(), Ns.end());
  const bool trilinear = kind == EstimateKind::trilinear_iso || kind == EstimateKind::trilinear_aniso;
  RandomFieldSpec rs;
  rs.mu = spec.mu;
  rs.mu_z = spec.mu_z;
  rs.q = spec.q;
  rs.in_d0 = trilinear;
  const GevreyParams p{spec.tau, spec.r, spec.gamma, spec.r};
  std::vector<std::vector<double>> ratios(Ns.size(), std::vector<double>(static_cast<std::size_t>(spec.samples)));
  parallel_for(spec.samples, spec.workers, [&](int s) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(s)));
    const SpectralField f = random_field(Nmax, rs, rng);
    const SpectralField g = random_field(Nmax, rs, rng);
    const SpectralField h = trilinear ? random_field(Nmax, rs, rng) : SpectralField();
    for (std::size_t j = 0; j < Ns.size(); ++j) {
      const int N = Ns[j];
      const SpectralField fN = embed(f, N), gN = embed(g, N);
      double v = 0.0;
      switch (kind) {
        case EstimateKind::trilinear_iso: v = trilinear_iso_ratio(fN, gN, embed(h, N), spec.tau, spec.r); break;
        case EstimateKind::trilinear_aniso:
          v = trilinear_aniso_ratio(fN, gN, embed(h, N), spec.tau, spec.gamma, spec.r);
          break;
        case EstimateKind::product_iso: v = product_ratio(fN, gN, p, NormFamily::isotropic, false); break;
        case EstimateKind::product_aniso: v = product_ratio(fN, gN, p, NormFamily::anisotropic, false); break;
        case EstimateKind::product_iso_seminorm: v = product_ratio(fN, gN, p, NormFamily::isotropic, true); break;
        case EstimateKind::product_aniso_seminorm:
          v = product_ratio(fN, gN, p, NormFamily::anisotropic, true);
          break;
      }
      ratios[j][static_cast<std::size_t>(s)] = v;
    }
  });
  std::vector<InequalityReport> out;
  double running = 0.0;
  std::vector<std::size_t> order(Ns.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return Ns[a] < Ns[b]; });
  out.resize(Ns.size());
  for (std::size_t j : order) {
    InequalityReport rep;
    rep.name = to_string(kind);
    rep.N = Ns[j];
    rep.samples = spec.samples;
    bool finite = true;
    for (double v : ratios[j]) {
      finite = finite && std::isfinite(v);
      rep.worst_ratio = std::max(rep.worst_ratio, v);
    }
    rep.empirical_C = rep.worst_ratio;
    rep.pass = finite && (running == 0.0 || rep.worst_ratio <= 10.0 * running);
    running = std::max(running, rep.worst_ratio);
    out[j] = rep;
  }
  return out;
}

double relative_change(const InequalityReport& a, const InequalityReport& b) {
  if (a.worst_ratio == 0.0) return b.worst_ratio == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(b.worst_ratio - a.worst_ratio) / a.worst_ratio;
}

double trilinear_scaling_defect(int N, const SamplingSpec& spec, const std::vector<double>& lambdas) {
  RandomFieldSpec rs;
  rs.mu = spec.mu;
  rs.mu_z = spec.mu_z;
  rs.q = spec.q;
  std::vector<double> worst(static_cast<std::size_t>(spec.samples), 0.0);
  parallel_for(spec.samples, spec.workers, [&](int s) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(s)));
    const SpectralField f = random_field(N, rs, rng), g = random_field(N, rs, rng), h = random_field(N, rs, rng);
    const double base = trilinear_iso_ratio(f, g, h, spec.tau, spec.r);
    double w = 0.0;
    for (double l : lambdas) {
      const double v = trilinear_iso_ratio(l * f, l * g, l * h, spec.tau, spec.r);
      w = std::max(w, base == 0.0 ? std::abs(v) : std::abs(v / base - 1.0));
    }
    worst[static_cast<std::size_t>(s)] = w;
  });
  return *std::max_element(worst.begin(), worst.end());
}

double solve_budget_constant(double m, double m0, double T) {
  if (!(m > 0.0)) return 0.0;
  const auto F = [&](double C) { return C * (1.0 + m0) * std::exp(C * T) - m; };
  double lo = 0.0, hi = 1.0;
  while (F(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalOverflow("solve_budget_constant: no bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EnergyBudgetReport energy_budget(const std::vector<Trajectory>& ensemble, double p, double T) {
  if (ensemble.empty()) throw InvalidArgument("energy_budget: empty ensemble");
  EnergyBudgetReport rep;
  rep.trajectories = static_cast<int>(ensemble.size());
  rep.p = p;
  rep.T = T;
  for (const auto& tr : ensemble) {
    if (tr.records.empty()) throw InvalidArgument("energy_budget: trajectory without records");
    double sup = 0.0, integral = 0.0;
    for (std::size_t n = 0; n < tr.records.size(); ++n) {
      const auto& rec = tr.records[n];
      sup = std::max(sup, std::pow(rec.gevrey, p));
      if (n + 1 < tr.records.size()) {
        const double h = tr.records[n + 1].t - rec.t;
        integral += h * std::pow(rec.seminorm, p - 2.0) * rec.dissipation_sq;
      }
    }
    rep.mean_budget += sup + integral;
    rep.mean_initial += std::pow(tr.records.front().gevrey, p);
  }
  rep.mean_budget /= rep.trajectories;
  rep.mean_initial /= rep.trajectories;
  rep.C_emp = solve_budget_constant(rep.mean_budget, rep.mean_initial, T);
  return rep;
}

std::vector<Trajectory> run_trajectories(const SimConfig& cfg, int N, int count, int N_ic) {
  if (N_ic < N) N_ic = N;
  const Problem base = build_problem(cfg);
  const Problem pb = problem_at(base, N);
  std::vector<Trajectory> out(static_cast<std::size_t>(count));
  parallel_for(count, cfg.workers, [&](int i) {
    const auto seed = trajectory_seed(cfg, i);
    const SpectralField V0 = project_D0(embed(initial_condition(cfg, seed, N_ic), N));
    out[static_cast<std::size_t>(i)] = simulate_problem(pb, V0, noise_stream_seed(seed), options_of(cfg));
  });
  return out;
}

UniquenessReport uniqueness_experiment(const SimConfig& cfg, std::uint64_t seed, double eps) {
  const Problem pb = build_problem(cfg);
  const SpectralField V0 = initial_condition(cfg, seed);
  SpectralField V3 = V0;
  ModeIndex m{cfg.ic.mode[0], cfg.ic.mode[1], cfg.ic.mode[2]};
  if (m.m3 < 0 || V0.modes().find(m) < 0) m = {1, 0, 1};
  const auto c = V0.at(m.m1, m.m2, m.m3);
  V3.set_mode(m, c[0] + eps, c[1]);
  V3 = project_D0(V3);

  const auto opt = options_of(cfg);
  Integrator a(pb, V0, 0, opt), b(pb, V0, 0, opt), d(pb, V3, 0, opt);
  Rng rng(noise_stream_seed(seed));
  UniquenessReport rep;
  rep.eps = eps;
  std::vector<double> ts, logs;
  const auto observe = [&] {
    const double t = a.time();
    const double e = active_norm(a.velocity() - b.velocity(), pb.schedule, t, pb.r);
    const double x = active_norm(a.velocity() - d.velocity(), pb.schedule, t, pb.r);
    rep.sup_diff_equal_ic = std::max(rep.sup_diff_equal_ic, e);
    rep.sup_diff_distinct_ic = std::max(rep.sup_diff_distinct_ic, x);
    if (x > 0.0) {
      ts.push_back(t);
      logs.push_back(std::log(x));
    }
  };
  observe();
  while (!a.done() && !b.done() && !d.done()) {
    const auto dW = wiener_increments(pb.noise.m_W, a.step_size(), rng);
    a.advance(dW);
    b.advance(dW);
    d.advance(dW);
    ++rep.steps;
    observe();
  }
  rep.eta_pair = {a.trajectory().eta.value_or(a.time()), b.trajectory().eta.value_or(b.time())};
  const auto fit = linear_fit(ts, logs);
  rep.growth_rate = fit.slope;
  rep.fit_r2 = fit.r2;
  return rep;
}

std::vector<ConvergenceRow> galerkin_convergence(const SimConfig& cfg, std::vector<int> levels) {
  if (levels.size() < 2) throw InvalidArgument("galerkin_convergence: need two levels");
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const int Nmin = levels.front(), Nmax = levels.back();
  SimConfig base_cfg = cfg;
  base_cfg.N = Nmin;
  const Problem base = build_problem(base_cfg);
  const auto seed = trajectory_seed(cfg, 0);
  SimConfig ic_cfg = cfg;
  ic_cfg.N = Nmax;
  const SpectralField V0 = initial_condition(ic_cfg, seed, Nmax);
  const auto opt = options_of(cfg);
  std::vector<Problem> pbs;
  std::vector<Integrator> its;
  pbs.reserve(levels.size());
  for (int N : levels) pbs.push_back(problem_at(base, N));
  for (std::size_t j = 0; j < levels.size(); ++j)
    its.emplace_back(pbs[j], project_D0(embed(V0, levels[j])), 0, opt);
  std::vector<ConvergenceRow> rows(levels.size());
  for (std::size_t j = 0; j < levels.size(); ++j) rows[j].N = levels[j];
  Rng rng(noise_stream_seed(seed));
  const auto observe = [&] {
    const SpectralField ref = its.back().velocity();
    for (std::size_t j = 0; j + 1 < its.size(); ++j) {
      const double e = active_norm(embed(its[j].velocity(), Nmax) - ref, pbs.back().schedule, its.back().time(),
                                   pbs.back().r);
      rows[j].sup_diff = std::max(rows[j].sup_diff, e);
    }
  };
  observe();
  int steps = 0;
  const auto any_done = [&] {
    return std::any_of(its.begin(), its.end(), [](const Integrator& x) { return x.done(); });
  };
  while (!any_done()) {
    const auto dW = wiener_increments(base.noise.m_W, its.front().step_size(), rng);
    for (auto& it : its) it.advance(dW);
    ++steps;
    observe();
  }
  for (auto& r : rows) r.steps = steps;
  return rows;
}

BrownianPath::BrownianPath(int m_W, double dt_fine, int n_fine, std::uint64_t seed)
    : m_W_(m_W), dt_(dt_fine), n_(n_fine) {
  if (m_W < 1 || !(dt_fine > 0.0) || n_fine < 1) throw InvalidArgument("BrownianPath: bad arguments");
  Rng rng(seed);
  dW_.resize(static_cast<std::size_t>(m_W) * static_cast<std::size_t>(n_fine));
  const double s = std::sqrt(dt_fine);
  for (auto& x : dW_) x = s * rng.normal();
}

std::vector<double> BrownianPath::increment(int j, int stride) const {
  if (stride < 1 || j < 0 || (j + 1) * stride > n_) throw InvalidArgument("BrownianPath: increment out of range");
  std::vector<double> out(static_cast<std::size_t>(m_W_), 0.0);
  for (int s = j * stride; s < (j + 1) * stride; ++s)
    for (int k = 0; k < m_W_; ++k) out[static_cast<std::size_t>(k)] += dW_[static_cast<std::size_t>(s) * m_W_ + k];
  return out;
}

ConsistencyReport formulation_consistency(const Problem& pb, const SpectralField& V0, double dt, double t_end,
                                          std::uint64_t seed) {
  const int n = static_cast<int>(std::lround(t_end / dt));
  if (n < 1) throw InvalidArgument("formulation_consistency: t_end < dt");
  const double tend = n * dt;
  const BrownianPath path(pb.noise.m_W, 0.5 * dt, 2 * n, seed);
  const auto run = [&](int stride) {
    IntegratorOptions o;
    o.dt = 0.5 * dt * stride;
    o.t_end = tend;
    o.stop_on_eta = false;
    o.form = Formulation::V_form;
    Integrator v(pb, V0, 0, o);
    o.form = Formulation::U_form;
    Integrator u(pb, V0, 0, o);
    double err = 0.0;
    for (int j = 0; !v.done() && !u.done(); ++j) {
      const auto dW = path.increment(j, stride);
      v.advance(dW);
      u.advance(dW);
      err = std::max(err, active_norm(v.velocity() - u.velocity(), pb.schedule, v.time(), pb.r));
    }
    return err;
  };
  ConsistencyReport rep;
  rep.dt = dt;
  rep.err_dt = run(2);
  rep.err_half = run(1);
  rep.ratio = rep.err_dt > 0.0 ? rep.err_half / rep.err_dt : 0.0;
  rep.C_emp = rep.err_dt / dt;
  rep.pass = std::isfinite(rep.ratio) && rep.ratio >= 0.35 && rep.ratio <= 0.65;
  return rep;
}

std::vector<std::pair<double, std::vector<SpectrumBucket>>> spectrum_history(const Problem& pb,
                                                                            const SpectralField& V0,
                                                                            std::uint64_t noise_seed, double dt,
                                                                            int sample_every) {
  if (sample_every < 1) sample_every = 1;
  std::vector<std::pair<double, std::vector<SpectrumBucket>>> out;
  IntegratorOptions o;
  o.dt = dt;
  o.stop_on_eta = true;
  simulate_problem(pb, V0, noise_seed, o, [&](const StepRecord& rec, const SpectralField& V, int step) {
    if (step % sample_every == 0 || rec.stopped || rec.t >= pb.schedule.T_max)
      out.emplace_back(rec.t, vertical_spectrum_decay(V));
  });
  return out;
}

std::vector<std::pair<double, double>> vertical_rate_history(const Problem& pb, const SpectralField& V0,
                                                             std::uint64_t noise_seed, double dt,
                                                             int sample_every) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [t, b] : spectrum_history(pb, V0, noise_seed, dt, sample_every))
    out.emplace_back(t, fit_vertical_decay_rate(b));
  return out;
}

std::vector<bool> resolved_buckets(const std::vector<std::vector<SpectrumBucket>>& spectra, double floor_rel) {
  if (spectra.empty()) return {};
  std::vector<bool> use(spectra.front().size(), true);
  for (const auto& b : spectra) {
    double peak = 0.0;
    for (const auto& x : b)
      if (x.count > 0) peak = std::max(peak, x.energy / x.count);
    for (std::size_t m = 0; m < b.size(); ++m)
      if (b[m].count == 0 || !(b[m].energy / b[m].count > floor_rel * peak)) use[m] = false;
  }
  return use;
}

double fit_rate_on(const std::vector<SpectrumBucket>& b, const std::vector<bool>& use) {
  std::vector<SpectrumBucket> sel;
  for (std::size_t m = 0; m < b.size(); ++m)
    if (use[m]) sel.push_back(b[m]);
  return fit_vertical_decay_rate(sel);
}

SmoothingReport viscous_smoothing(const SimConfig& cfg, int count, double t_check, int sample_every,
                                  double floor_rel) {
  if (cfg.mode != Regime::viscous) throw InvalidArgument("viscous_smoothing: viscous configuration required");
  const Problem pb = build_problem(cfg);
  SmoothingReport rep;
  rep.trajectories = count;
  rep.t_check = t_check;
  rep.first_rates.assign(static_cast<std::size_t>(count), 0.0);
  rep.buckets_used.assign(static_cast<std::size_t>(count), 0);
  std::vector<int> ok(static_cast<std::size_t>(count), 0);
  parallel_for(count, cfg.workers, [&](int i) {
    const auto seed = trajectory_seed(cfg, i);
    const auto hist =
        spectrum_history(pb, initial_condition(cfg, seed), noise_stream_seed(seed), cfg.dt, sample_every);
    std::vector<std::vector<SpectrumBucket>> window;
    std::vector<double> ts;
    for (const auto& [t, b] : hist) {
      if (t < t_check - 1e-12) continue;
      window.push_back(b);
      ts.push_back(t);
    }
    if (window.empty()) return;
    const auto use = resolved_buckets(window, floor_rel);
    const int nb = static_cast<int>(std::count(use.begin(), use.end(), true));
    rep.buckets_used[static_cast<std::size_t>(i)] = nb;
    if (nb < 2) return;
    std::vector<double> rates;
    for (const auto& b : window) rates.push_back(fit_rate_on(b, use));
    rep.first_rates[static_cast<std::size_t>(i)] = rates.front();
    bool good = rates.front() > 0.0;
    for (std::size_t k = 1; k < rates.size() && good; ++k) good = rates[k] >= rates[k - 1];
    ok[static_cast<std::size_t>(i)] = good;
  });
  for (int v : ok) rep.passing += v;
  rep.fraction = count > 0 ? static_cast<double>(rep.passing) / count : 0.0;
  return rep;
}

SandwichReport sandwich_check(NormFamily family, int N, int samples, const GevreyParams& p, std::uint64_t seed) {
  SandwichReport rep;
  rep.family = family;
  rep.samples = samples;
  RandomFieldSpec rs;
  rs.mu = 0.1;
  rs.q = 1.0;
  rs.in_d0 = false;
  const double c = std::pow(2.0, 1.0 - p.r);
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const SpectralField f = random_field(N, rs, rng);
    const double l2 = l2_norm(f), sem = norm(f, p, family, NormKind::seminorm),
                 full = norm(f, p, family, NormKind::full);
    const double lo = l2 * l2 + sem * sem, f2 = full * full;
    rep.worst_lower = std::max(rep.worst_lower, lo / f2);
    rep.worst_upper = std::max(rep.worst_upper, f2 / (2.0 * lo));
    rep.worst_lower_corrected = std::max(rep.worst_lower_corrected, (l2 * l2 + c * sem * sem) / f2);
  }
  rep.lower_pass = rep.worst_lower <= 1.0 + 1e-12;
  rep.upper_pass = rep.worst_upper <= 1.0 + 1e-12;
  return rep;
}

PoincareReport poincare_sweep(int N, const std::vector<int>& Nprimes, int samples, std::uint64_t seed) {
  PoincareReport rep;
  RandomFieldSpec rs;
  rs.mu = 0.05;
  rs.q = 0.5;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const SpectralField f = random_field(N, rs, rng);
    for (int Np : Nprimes) {
      const auto r = poincare_check(f, Np);
      ++rep.samples;
      const double q = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
      rep.worst_ratio = std::max(rep.worst_ratio, q);
      if (r.lhs > r.rhs * (1.0 + 1e-12)) ++rep.failures;
    }
  }
  return rep;
}

OrthogonalityReport energy_orthogonality(int N, int samples, std::uint64_t seed, QMethod method) {
  OrthogonalityReport rep;
  rep.samples = samples;
  RandomFieldSpec rs;
  rs.mu = 0.1;
  rs.q = 1.0;
  const GevreyParams p02{0.0, 2.0, 0.0, 2.0};
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const SpectralField V = random_field(N, rs, rng);
    const double a = std::abs(inner(nonlinear_Q(V, V, method), V));
    const double n02 = norm(V, p02, NormFamily::isotropic, NormKind::full);
    const double den = n02 * n02 * l2_norm(V);
    rep.worst = std::max(rep.worst, den > 0.0 ? a / den : a);
  }
  return rep;
}

QEquivalenceReport q_equivalence(int N, int samples, std::uint64_t seed) {
  QEquivalenceReport rep;
  rep.samples = samples;
  RandomFieldSpec rs;
  rs.mu = 0.1;
  rs.q = 1.0;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const SpectralField f = random_field(N, rs, rng), g = random_field(N, rs, rng);
    const SpectralField a = nonlinear_Q(f, g, QMethod::pseudospectral), b = nonlinear_Q(f, g, QMethod::direct);
    double d = 0.0, m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (int c = 0; c < 2; ++c) {
        d = std::max(d, std::abs(a[i][c] - b[i][c]));
        m = std::max(m, std::abs(b[i][c]));
      }
    }
    rep.worst_abs = std::max(rep.worst_abs, d);
    rep.worst_rel = std::max(rep.worst_rel, m > 0.0 ? d / m : d);
  }
  return rep;
}

CutoffReport cutoff_check(const std::function<double(double)>& theta, double rho) {
  CutoffReport rep;
  const int n = 4000;
  double prev = 2.0;
  for (int i = 0; i <= n; ++i) {
    const double x = 2.0 * rho * i / n;
    const double v = theta(x);
    const auto bad = [&](const char* what) {
      rep.detail = std::string(what) + " at x = " + std::to_string(x);
      return rep;
    };
    if (!(v >= 0.0 && v <= 1.0)) return bad("theta outside [0, 1]");
    if (x <= 0.5 * rho && v != 1.0) return bad("theta != 1 below rho/2");
    if (x >= rho && v != 0.0) return bad("theta != 0 above rho");
    if (v > prev) return bad("theta increasing");
    prev = v;
  }
  rep.pass = true;
  rep.detail = "ok";
  return rep;
}

}  // namespace gpe
