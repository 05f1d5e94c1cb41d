#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "drsplit/exactsolve.hpp"
#include "drsplit/precond.hpp"
#include "drsplit/saddle.hpp"

namespace drsplit {

enum class Algorithm { dr, pdr, adr, padr, adrsc, padrsc };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);
bool is_preconditioned(Algorithm a);

/// Streaming weighted mean sum_k w_k x_k / sum_k w_k.
class ErgodicAccumulator {
 public:
  ErgodicAccumulator() = default;
  explicit ErgodicAccumulator(std::size_t dim) : mean_(dim, 0.0) {}

  void add(std::span<const double> x, double weight);
  const Vec& mean() const noexcept { return mean_; }
  double total_weight() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0.0; }

 private:
  Vec mean_;
  double total_ = 0.0;
};

void ergodic_update(ErgodicAccumulator& acc, std::span<const double> x, double weight);

/// State of every variant. xbar holds xbar (DR, aDR^sc) or xhat (aDR).
struct IterateState {
  Vec x, y;
  Vec xbar, ybar;
  Vec d;  ///< carried by the preconditioned variants, d^0 = xbar^0
  long k = 0;
  ErgodicAccumulator erg_x, erg_y;

  static IterateState initial(const SaddleProblem& problem);
  static IterateState initial(std::span<const double> xbar0, std::span<const double> ybar0);
};

/// Step sizes of the accelerated schedule. theta is stored through its
/// reciprocal sqrt(1 + sigma gamma) so that lambda_1 = sqrt(1 + sigma_0 gamma)
/// is exact.
struct StepSchedule {
  double sigma0 = 1.0, tau0 = 1.0;
  double sigma = 1.0, tau = 1.0;
  double gamma = 0.0;
  double inv_theta = 1.0;
  double theta = 1.0;
  double lambda = 1.0;      ///< lambda_k = prod_{k' < k} 1/theta_{k'}
  double lambda_sum = 0.0;  ///< sum_{k' < k} lambda_{k'} = 1/nu_k
  long k = 0;

  static StepSchedule start(double sigma0, double tau0, double gamma);
  double nu() const { return 1.0 / lambda_sum; }
};

/// sigma <- theta sigma, tau <- tau / theta, theta <- 1/sqrt(1 + sigma gamma),
/// lambda <- lambda / theta, lambda_sum += lambda (old).
void schedule_update(StepSchedule& s);

/// Lower and upper bounds on lambda_k and the upper bound on nu_k.
double lambda_lower_bound(double sigma0, double gamma, long k);
double lambda_upper_bound(double sigma0, double gamma, long k);
double nu_upper_bound(double sigma0, double gamma, long k);

/// Basic iteration; elliptic solves with c = sigma tau.
void dr_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau,
             const EllipticSolver& elliptic);
/// Preconditioned iteration; M is a preconditioner for I + sigma tau K^*K.
void pdr_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau,
              const SplitPreconditioner& m);
/// Accelerated iteration; elliptic solves with c = sigma_0 tau_0. Advances the schedule.
void adr_step(IterateState& st, StepSchedule& s, const SaddleProblem& pr,
              const EllipticSolver& elliptic);
void padr_step(IterateState& st, StepSchedule& s, const SaddleProblem& pr,
               const SplitPreconditioner& m);
/// Strongly convex-concave variant; elliptic solves with c = theta^2 sigma tau.
void adrsc_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau, double theta,
                const EllipticSolver& elliptic);
void padrsc_step(IterateState& st, const SaddleProblem& pr, double sigma, double tau, double theta,
                 const SplitPreconditioner& m);

/// Largest admissible acceleration factors.
double adr_gamma_bound(double gamma1, double sigma0, double tau0, double L);
double padr_gamma_bound(double gamma1, double norm_m);
double adrsc_gamma_bound(double gamma1, double sigma, double tau, double L);
double padrsc_gamma_bound(double gamma1, double sigma, double theta, double norm_m);

struct AdrscParams {
  double sigma, tau, gamma, gamma_prime;
};
/// Parameter choice from the dropped-cubic approximation:
/// sigma = sqrt(g2/(g1 L^2)), tau = sqrt(g1/(g2 L^2)),
/// gamma = g1 L/(L + sqrt(g1 g2)), gamma' = g2 L/(L + sqrt(g1 g2)).
AdrscParams adrsc_params_heuristic(double gamma1, double gamma2, double L);

struct RunConfig {
  Algorithm algorithm = Algorithm::dr;
  double sigma0 = 1.0;
  std::optional<double> tau0;   ///< default 15/sigma0, or sigma gamma1/gamma2 for the sc variants
  std::optional<double> gamma;  ///< default per algorithm
  PreconditionerSpec precond{PreconditionerSpec::Family::gs, std::nullopt, 2};
  long max_iter = 1000;
  double gap_tol_per_pixel = 0.0;
  int log_every = 10;
  bool strict = true;     ///< refuse unverifiable admissibility conditions
  bool log_ergodic = false;
  int gamma_rounds = 10;
};

struct LogRecord {
  long iter = 0;
  double gap_per_pixel = 0.0;
  double primal_energy = 0.0;
  double dual_energy = 0.0;
  double elapsed_ms = 0.0;
  double ergodic_gap_per_pixel = std::numeric_limits<double>::quiet_NaN();
};

/// Parameters actually used by a run after defaults and validation.
struct ResolvedParams {
  double sigma = 0.0, tau = 0.0;
  double gamma = 0.0;
  double theta = 1.0;
  double norm_m = 0.0;  ///< norm estimate of M for the preconditioned variants
  double c = 0.0;       ///< coupling of the elliptic operator I + c K^*K
  std::vector<std::string> warnings;
};

struct RunResult {
  IterateState state;
  StepSchedule schedule;
  ResolvedParams params;
  long iterations = 0;
  double elapsed_ms = 0.0;
  bool converged = false;
  std::vector<LogRecord> history;
};

struct RunCallbacks {
  std::function<void(const IterateState&, const StepSchedule&)> on_step;
  std::function<void(const LogRecord&)> on_log;
};

/// Preconditioner for T = I + c K^*K of the problem. Grid problems use the
/// stencil builders; other problems only support the exact family.
SplitPreconditioner make_preconditioner(const SaddleProblem& problem, const PreconditionerSpec& spec,
                                        double c, bool strict);

/// Validates config against problem and fills in defaults. Throws ConfigError.
ResolvedParams resolve_params(const SaddleProblem& problem, const RunConfig& config);

/// Runs until the per-pixel gap at a logged iteration drops to the tolerance
/// or max_iter is reached. The gap is evaluated at k = 1 and every log_every
/// iterations (and at the last one); elapsed_ms excludes gap evaluation.
RunResult run(const SaddleProblem& problem, const RunConfig& config,
              const RunCallbacks& callbacks = {});

}  // namespace drsplit
