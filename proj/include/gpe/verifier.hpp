#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpe/config.hpp"
#include "gpe/field.hpp"
#include "gpe/norms.hpp"
#include "gpe/stepper.hpp"

namespace gpe {

struct InequalityReport {
  std::string name;
  int N = 0;
  int samples = 0;
  double worst_ratio = 0.0;  ///< lhs / rhs-without-constant
  double empirical_C = 0.0;  ///< equal to worst_ratio
  bool pass = false;
};

/// |<A^r e^{tau A} Q(f,g), A^r e^{tau A} h>| over
/// ||f||_{tau,r} |g|_{r+1/2} |h|_{r+1/2} + ||g||_{tau,r} |f|_{r+1/2} |h|_{r+1/2}
///   + ||h||_{tau,r} |f|_{r+1/2} |g|_{r+1/2},  |x|_{s} = ||A^s e^{tau A} x||.
/// Zero over zero is 0; nonzero over zero throws ContractViolation.
double trilinear_iso_ratio(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                           double tau, double r);

/// Anisotropic analogue with weights e^{tau A_h} e^{gamma A_z}: three
/// ||.||_{tau,r,gamma,r} x A_h^{1/2}-seminorm products plus the two A_z-mixed terms.
double trilinear_aniso_ratio(const SpectralField& f, const SpectralField& g, const SpectralField& h,
                             double tau, double gamma, double r);

/// ||fg|| / (||f|| ||g||) on the first components (scalar fields), full norm of the
/// family; `seminorm` uses |A^r e (fg)| / ((|f_0| + |A^r e f|)(|g_0| + |A^r e g|)).
double product_ratio(const SpectralField& f, const SpectralField& g, const GevreyParams& p,
                     NormFamily family, bool seminorm);

enum class EstimateKind {
  trilinear_iso,
  trilinear_aniso,
  product_iso,
  product_aniso,
  product_iso_seminorm,
  product_aniso_seminorm,
};
const char* to_string(EstimateKind k);

struct SamplingSpec {
  int samples = 500;
  double tau = 0.1;
  double gamma = 0.05;
  double r = 2.6;
  double mu = 0.3;   ///< horizontal decay of the sampled fields
  double mu_z = -1;  ///< negative: mu
  double q = 3.6;
  std::uint64_t seed = 1;
  int workers = 0;
};

/// Sampled sup of the ratio at each order in Ns. Sample i is drawn once at max(Ns)
/// from substream derive_seed(seed, i) and projected to every order, so the sups
/// are comparable. pass: finite, and no sup exceeds 10x the running max at smaller N.
std::vector<InequalityReport> sample_estimate(EstimateKind kind, const std::vector<int>& Ns,
                                              const SamplingSpec& spec);

/// |sup(N_b) - sup(N_a)| / sup(N_a)
double relative_change(const InequalityReport& a, const InequalityReport& b);

/// max over samples of |ratio(lambda f, lambda g, lambda h) / ratio(f, g, h) - 1|
double trilinear_scaling_defect(int N, const SamplingSpec& spec, const std::vector<double>& lambdas);

/// Energy budget of an ensemble.
struct EnergyBudgetReport {
  int trajectories = 0;
  double p = 0.0;
  double T = 0.0;
  double mean_budget = 0.0;   ///< E[sup ||V||^p + sum dt |V|^{p-2} dissipation^2]
  double mean_initial = 0.0;  ///< E ||V0||^p
  double C_emp = 0.0;         ///< solves mean_budget = C (1 + mean_initial) e^{C T}
};

EnergyBudgetReport energy_budget(const std::vector<Trajectory>& ensemble, double p, double T);
/// Root C >= 0 of C (1 + m0) e^{C T} = m.
double solve_budget_constant(double m, double m0, double T);

/// Ensemble of cfg at order N; trajectory i uses trajectory_seed(cfg, i).
/// The initial data are drawn at N_ic (>= N) and projected so every order sees the same law.
std::vector<Trajectory> run_trajectories(const SimConfig& cfg, int N, int count, int N_ic = -1);

struct UniquenessReport {
  double sup_diff_equal_ic = 0.0;
  double sup_diff_distinct_ic = 0.0;
  std::pair<double, double> eta_pair{0.0, 0.0};  ///< stopping (or end) times of V^1 and V^2
  double growth_rate = 0.0;  ///< log-linear least-squares fit of ||V^1 - V^3||(t)
  double fit_r2 = 0.0;
  double eps = 0.0;
  int steps = 0;
};

/// V^1, V^2 from the same initial data and V^3 = V^1(0) + eps e_{ic.mode}, all driven
/// by one shared Wiener path; differences in the active norm up to eta_1 ^ eta_2 ^ T.
UniquenessReport uniqueness_experiment(const SimConfig& cfg, std::uint64_t seed, double eps);

struct ConvergenceRow {
  int N = 0;
  double sup_diff = 0.0;  ///< sup_t ||V_N - V_{N_max}|| (active norm, at N_max)
  int steps = 0;
};

/// Initial data drawn at max(levels) and projected; forcing and noise built at
/// min(levels) and embedded, so all levels share one Wiener path.
std::vector<ConvergenceRow> galerkin_convergence(const SimConfig& cfg, std::vector<int> levels);

/// Brownian increments on a fine grid, aggregated for coarser steps.
class BrownianPath {
 public:
  BrownianPath(int m_W, double dt_fine, int n_fine, std::uint64_t seed);
  double dt_fine() const { return dt_; }
  int fine_steps() const { return n_; }
  /// Increment over fine steps [j * stride, (j + 1) * stride).
  std::vector<double> increment(int j, int stride) const;

 private:
  int m_W_;
  double dt_;
  int n_;
  std::vector<double> dW_;
};

struct ConsistencyReport {
  double dt = 0.0;
  double err_dt = 0.0;       ///< sup_t ||V_V - V_U|| at dt
  double err_half = 0.0;     ///< same at dt / 2
  double ratio = 0.0;        ///< err_half / err_dt
  double C_emp = 0.0;        ///< err_dt / dt
  bool pass = false;         ///< ratio in [0.35, 0.65]
};

/// V_form against U_form on a shared path generated at dt / 2, up to t_end.
ConsistencyReport formulation_consistency(const Problem& pb, const SpectralField& V0, double dt,
                                          double t_end, std::uint64_t seed);

struct SmoothingReport {
  int trajectories = 0;
  int passing = 0;
  double fraction = 0.0;
  double t_check = 0.0;
  std::vector<double> first_rates;  ///< fitted vertical rate at t_check, per trajectory
  std::vector<int> buckets_used;    ///< resolved m3 buckets entering the fit, per trajectory
};

/// Buckets whose energy per mode stays above floor_rel times the peak bucket at every
/// sampled time; the rest sit at the floating-point floor and carry no decay information.
std::vector<bool> resolved_buckets(const std::vector<std::vector<SpectrumBucket>>& spectra, double floor_rel);

/// Fitted vertical decay rate along each trajectory, over the buckets resolved on
/// [t_check, end]: positive at the first sampled record with t >= t_check and
/// nondecreasing at every later one.
SmoothingReport viscous_smoothing(const SimConfig& cfg, int count, double t_check, int sample_every,
                                  double floor_rel = 1e-30);

/// Vertical spectrum of one trajectory at every sample_every-th record.
std::vector<std::pair<double, std::vector<SpectrumBucket>>> spectrum_history(const Problem& pb,
                                                                            const SpectralField& V0,
                                                                            std::uint64_t noise_seed, double dt,
                                                                            int sample_every);

/// Rate fitted over all buckets at each sampled record (t, gamma_fit).
std::vector<std::pair<double, double>> vertical_rate_history(const Problem& pb, const SpectralField& V0,
                                                             std::uint64_t noise_seed, double dt,
                                                             int sample_every);

struct SandwichReport {
  NormFamily family = NormFamily::isotropic;
  int samples = 0;
  double worst_lower = 0.0;  ///< max (||f||^2 + |A^r e f|^2) / ||f||^2_full
  double worst_upper = 0.0;  ///< max ||f||^2_full / (2 (||f||^2 + |A^r e f|^2))
  double worst_lower_corrected = 0.0;  ///< lower bound with 2^{1-r} on the seminorm
  bool lower_pass = false;
  bool upper_pass = false;
};

/// Norm-equivalence sandwich for random fields; tolerance 1e-12 relative.
SandwichReport sandwich_check(NormFamily family, int N, int samples, const GevreyParams& p, std::uint64_t seed);

struct PoincareReport {
  int samples = 0;
  int failures = 0;
  double worst_ratio = 0.0;  ///< max lhs / rhs
};

PoincareReport poincare_sweep(int N, const std::vector<int>& Nprimes, int samples, std::uint64_t seed);

struct OrthogonalityReport {
  int samples = 0;
  double worst = 0.0;  ///< max |<Q(V,V),V>| / (||V||_{0,2}^2 ||V||)
};

OrthogonalityReport energy_orthogonality(int N, int samples, std::uint64_t seed, QMethod method);

struct QEquivalenceReport {
  int samples = 0;
  double worst_abs = 0.0;  ///< max over modes of |Q_ps - Q_direct|
  double worst_rel = 0.0;  ///< worst_abs / max |Q_direct|
};

QEquivalenceReport q_equivalence(int N, int samples, std::uint64_t seed);

struct CutoffReport {
  bool pass = false;
  std::string detail;
};

/// theta = 1 on [0, rho/2], 0 on [rho, inf), non-increasing and within [0, 1].
CutoffReport cutoff_check(const std::function<double(double)>& theta, double rho);

/// Runs f(i) for i in [0, n) on a bounded pool; results are stored by index.
void parallel_for(int n, int workers, const std::function<void(int)>& f);

}  // namespace gpe
