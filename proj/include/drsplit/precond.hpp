#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drsplit/dense.hpp"
#include "drsplit/exactsolve.hpp"
#include "drsplit/grid.hpp"

namespace drsplit {

using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Symmetric positive definite system operator T with a bound on |T| and a
/// lower bound on its spectrum. c is the coupling of T = I + c K^*K when T
/// comes from a grid stencil, NaN otherwise.
struct SystemOperator {
  std::size_t dim = 0;
  ApplyFn apply;
  double norm_bound = std::numeric_limits<double>::infinity();
  double lower_bound = 0.0;
  double c = std::numeric_limits<double>::quiet_NaN();
};

/// Five-point stencil of T = I + c K^*K = D - E - E^* on a width x height grid.
/// Pixels with (i + j) even are red, the rest black; E holds the couplings
/// from red columns into black rows.
struct StencilData {
  StencilData(std::size_t width, std::size_t height, double c);

  std::size_t width;
  std::size_t height;
  double c;
  Vec diagonal;                ///< 1 + c * (number of neighbours)
  double offdiag;              ///< T_pq = -c for neighbouring p, q
  std::vector<std::uint8_t> red;

  std::size_t size() const noexcept { return width * height; }
  double max_diagonal() const;
  double min_diagonal() const;
  /// Gershgorin bound 1 + 8c on |T| (max row sum of |t_pq|).
  double norm_bound() const;
  /// Gershgorin bound on lambda_max(T - D): max_p c * deg(p).
  double offdiag_bound() const;

  SystemOperator system() const;
};

/// x -> x on R^n.
SystemOperator identity_system(std::size_t n);
/// x -> c K^*K x for the grid gradient (positive semi-definite, |.| <= 8c).
SystemOperator gradient_normal_system(std::size_t width, std::size_t height, double c);

enum class PrecondKind {
  exact,
  richardson,
  damped_jacobi,
  sym_gauss_seidel_rb,
  ssor,
  nfold,
  symmetrized,
  additive
};

std::string to_string(PrecondKind kind);

struct PrecondParams {
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double omega = std::numeric_limits<double>::quiet_NaN();
  int n = 1;
};

/// Feasible preconditioner M for T: symmetric, invertible, M - T >= 0.
/// The object is immutable; copies share the underlying closures.
class SplitPreconditioner {
 public:
  using UpdateFn = std::function<void(std::span<double>, std::span<const double>)>;

  SplitPreconditioner(PrecondKind kind, PrecondParams params, SystemOperator system,
                      ApplyFn apply_inverse, double norm_estimate, double lower_estimate,
                      UpdateFn update = {});

  PrecondKind kind() const noexcept { return kind_; }
  const PrecondParams& params() const noexcept { return params_; }
  const SystemOperator& system() const noexcept { return system_; }
  std::size_t dim() const noexcept { return system_.dim; }

  /// Upper bound on |M|.
  double norm_estimate() const noexcept { return norm_estimate_; }
  /// Upper bound on |T|.
  double system_norm_estimate() const noexcept { return system_.norm_bound; }
  /// Lower bound on the smallest eigenvalue of M.
  double lower_estimate() const noexcept { return lower_estimate_; }

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// out = M^{-1} r.
  void apply_inverse(std::span<const double> r, std::span<double> out) const;
  /// d <- d + M^{-1}(b - T d).
  void update(std::span<double> d, std::span<const double> b) const;

 private:
  PrecondKind kind_;
  PrecondParams params_;
  SystemOperator system_;
  ApplyFn inverse_;
  UpdateFn update_;
  double norm_estimate_;
  double lower_estimate_;
  std::vector<std::string> warnings_;
};

/// One preconditioned update d + M^{-1}(b - T d); c must match M's system.
GridImage precond_step(const GridImage& d, const GridImage& b, const SplitPreconditioner& m,
                       double c);

/// M = T, applied through an exact solver.
SplitPreconditioner build_exact(const SystemOperator& system, const EllipticSolver& solver);
SplitPreconditioner build_exact(const StencilData& stencil);

/// M = lambda I. Accepted for any lambda > 0; a warning is recorded when
/// lambda is below the Gershgorin bound on |T|.
SplitPreconditioner build_richardson(const StencilData& stencil, double lambda);

/// M = (lambda + 1) D. Feasible for lambda >= lambda_max(T - D); lambda below
/// the Gershgorin bound is refused in strict mode (ConfigError) and recorded
/// as a warning otherwise.
SplitPreconditioner build_damped_jacobi(const StencilData& stencil, double lambda,
                                        bool strict = true);

/// M = (D - E) D^{-1} (D - E^*) with red-black ordering.
SplitPreconditioner build_sgs_redblack(const StencilData& stencil);

/// M = (D/w - E) (((2 - w)/w) D)^{-1} (D/w - E^*), 0 < w < 2.
/// Uses the same sweeps as build_sgs_redblack, so w = 1 is bitwise identical.
SplitPreconditioner build_ssor(const StencilData& stencil, double omega);

/// Upper bound on |M - T| for the red-black SSOR split:
/// w/(2-w) |B|_1 |B|_inf with B = ((1-w)/w) D^{1/2} + D^{-1/2} E^*,
/// since M - T = w/(2-w) B^T B.
double ssor_excess_bound(const StencilData& stencil, double omega);

/// Closed-form model 4c^2/(1 + 4c) of |M - T| for red-black SGS on the
/// interior stencil. Not an upper bound on small grids (corner and edge
/// pixels raise the true value); kept for parameter heuristics.
double sgs_excess_model(double c);

/// n applications of M per update. The induced M_n stays feasible and
/// |M_n| <= |M|, so the norm estimate is inherited.
SplitPreconditioner combine_nfold(const SplitPreconditioner& m, int n);

/// Non-symmetric one-sided sweep M0 with its adjoint, for symmetrization.
struct OneSidedSweep {
  std::size_t dim = 0;
  ApplyFn inverse;          ///< r -> M0^{-1} r
  ApplyFn inverse_adjoint;  ///< r -> M0^{-*} r
  /// Bound on |M0 (M0 + M0^* - T)^{-1} M0^*| if known.
  double induced_norm_bound = std::numeric_limits<double>::infinity();
};

/// Forward red-black Gauss-Seidel sweep, M0 = D - E.
OneSidedSweep gauss_seidel_sweep(const StencilData& stencil);
/// Jacobi sweep, M0 = D.
OneSidedSweep jacobi_sweep(const StencilData& stencil);

/// d^{1/2} = d + M0^{-1}(b - T d), d^{1} = d^{1/2} + M0^{-*}(b - T d^{1/2}).
/// Verifies the adjoint pairing on sampled vectors (ContractViolation if
/// the mismatch exceeds 1e-10).
SplitPreconditioner combine_symmetrized(const OneSidedSweep& sweep, const SystemOperator& system);

/// For T = T1 + T2 with M feasible for T1 and T2 >= 0:
/// d^{1/2} = d + M^{-1}(b - T2 d - T1 d), d^{1} = d + M^{-1}(b - T2 d^{1/2} - T1 d).
/// The induced preconditioner is M (M - T2)^{-1} M; its norm estimate is
/// |M|^2 / (lower(M) - |T2|), infinite when M - T2 is not provably positive.
SplitPreconditioner combine_additive(const SplitPreconditioner& m, const SystemOperator& t2);

struct FeasibilityCertificate {
  double min_eig_difference = 0.0;  ///< smallest eigenvalue of M - T
  double min_singular_value = 0.0;  ///< invertibility margin of M
  double symmetry_error = 0.0;      ///< max |M - M^T|
  bool feasible = false;
};

/// Dense feasibility check: min eig(M - T) >= -tol and M invertible.
FeasibilityCertificate check_feasible(const DenseMatrix& m, const DenseMatrix& t, double tol);

/// Dense M, obtained by inverting the materialized M^{-1}.
DenseMatrix materialize_preconditioner(const SplitPreconditioner& m);
DenseMatrix materialize_system(const SystemOperator& t);

/// |T| / (1 - |M^{-1}| rho^n), or nullopt when the denominator is not positive.
std::optional<double> nfold_norm_bound(double norm_t, double norm_m_inv, double rho, int n);

/// Norm estimates of the family M_theta for T_theta = I + theta^2 sigma tau K^*K.
struct NormModel {
  std::function<double(double)> system_norm;  ///< |T_theta| estimate
  std::function<double(double)> excess_norm;  ///< |M_theta - T_theta| estimate
  bool theta_monotone = true;
};

/// M_theta = T_theta with |T_theta| = 1 + theta^2 sigma tau L^2.
NormModel exact_norm_model(double sigma, double tau, double L);
/// |T_theta| = 1 + theta^2 sigma tau L^2 and the red-black SGS model
/// 4 theta^4 (sigma tau)^2 / (1 + 4 theta^2 sigma tau).
NormModel sgs_norm_model(double sigma, double tau, double L);
/// Norm estimates read off a preconditioner built for each theta.
NormModel family_norm_model(double sigma, double tau,
                            std::function<SplitPreconditioner(double c)> build,
                            bool theta_monotone = true);

struct GammaFixedPoint {
  double gamma = 0.0;
  double theta = 1.0;
  std::vector<double> gamma_history;
};

/// Starting from theta = 1, repeats `rounds` times
///   gamma <- 2 g1 / (1 + (1 + 2 sigma g1) theta^{-2} (|M_theta| - 1)),
///   theta <- 1 / (1 + sigma gamma).
/// Throws ContractViolation for a model not flagged theta-monotone or when
/// gamma decreases between rounds.
GammaFixedPoint gamma_fixed_point(double sigma, double gamma1, const NormModel& model,
                                  int rounds = 10);

/// Configuration string: "exact", "richardson[:<lambda>]", "jacobi[:<lambda>]",
/// "gs<n>", "ssor:<omega>:<n>".
struct PreconditionerSpec {
  enum class Family { exact, richardson, jacobi, gs, ssor };
  Family family = Family::exact;
  std::optional<double> value;  ///< lambda or omega
  int n = 1;

  friend bool operator==(const PreconditionerSpec&, const PreconditionerSpec&) = default;
};

PreconditionerSpec parse_preconditioner_spec(const std::string& text);
std::string to_string(const PreconditionerSpec& spec);

/// Builds the preconditioner named by spec for the stencil. Family::exact
/// uses the DCT solver; omitted lambdas default to the Gershgorin bounds.
SplitPreconditioner build_preconditioner(const PreconditionerSpec& spec, const StencilData& stencil,
                                         bool strict = true);

}  // namespace drsplit
