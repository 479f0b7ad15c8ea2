#pragma once

#include <string>
#include <vector>

#include "kpp/eigenproblem.hpp"
#include "kpp/grid.hpp"

namespace kpp {

struct MinSpeedOptions {
  double eigen_tol = 1e-9;
  /// Golden-section target: relative width of the final lambda interval.
  /// c* is stationary at lambda*, so 1e-5 already pins c* to ~1e-10; the
  /// tight default matters only for lambda* itself.
  double lambda_rtol = 1e-8;
  double lambda_min = 1e-3;
  double lambda_max = 1e3;
  double lambda_hint = 1.0;
  /// Bound on |d/dlambda (gamma/lambda)| at the located minimum.
  double stationarity_tol = 1e-4;
  const PeriodicScalarField* warm_psi = nullptr;
};

struct MinSpeedResult {
  double c_star = 0.0;
  double lambda_star = 0.0;
  double stationarity = 0.0;  // centered FD derivative at lambda*
  double bracket_width = 0.0;
  int gamma_evals = 0;
  EigenPair eigen_at_min;
};

/// c*(e) = inf_{lambda>0} gamma(e,lambda)/lambda by bracketing plus
/// golden-section on log(lambda). Throws BracketFailure when no minimum is
/// bracketed in [lambda_min, lambda_max].
MinSpeedResult minimal_speed(const PeriodicScalarField& mu, const Vec& e,
                             const MinSpeedOptions& opts = {});

struct ExtendedSpeed {
  double c_star = 0.0;       // c*(v) = |v| c*(v/|v|)
  double lambda_star = 0.0;  // lambda*(v) = lambda*(v/|v|) / |v|
};

/// Degree-1 homogeneous extension of c* (and the matching extension of
/// lambda*) to nonzero vectors. Throws ZeroVector.
ExtendedSpeed extended_speed(const PeriodicScalarField& mu, const Vec& v,
                             const MinSpeedOptions& opts = {});

struct SpreadOptions {
  MinSpeedOptions speed;
  /// Coarse scan resolution when no atlas samples are supplied (2D).
  int coarse_angles = 256;
  /// Golden-section width (radians) before the parabolic polish.
  double angle_tol = 1e-3;
  /// Step of the final three-point parabolic fit (radians).
  double polish_step = 1e-3;
};

/// One precomputed direction sample used to seed the minimization.
struct AngleSample {
  double theta;
  double c_star;
  double lambda_star;
};

struct SpreadResult {
  double w_star = 0.0;
  double theta_prime = 0.0;
  Vec e_prime{1.0, 0.0};
  double c_star_at_eprime = 0.0;
  double lambda_star_at_eprime = 0.0;
  int c_star_evals = 0;
  EigenPair eigen_at_eprime;  // eigenpair at (e', lambda*(e'))
};

/// Freidlin-Gartner speed w*(e) = min over unit directions in the open
/// half-sphere of c*(eb)/(e.eb); the argmin is refined with fresh
/// eigenproblem solves. In 1D the half-sphere is {e}, so w* = c*(e).
SpreadResult spreading_speed(const PeriodicScalarField& mu, const Vec& e,
                             const std::vector<AngleSample>& atlas_samples,
                             const SpreadOptions& opts = {});

/// Bramson log-shift coefficient (n/2+1)/(lambda_star * cos_angle).
/// Throws DomainError on non-positive inputs.
double bramson_coefficient(int dim, double lambda_star_at_eprime,
                           double cos_angle);

struct DirectionDiagnostics {
  double bracket_width = 0.0;
  int gamma_evals = 0;
  int refine_evals = 0;
};

struct DirectionRecord {
  double theta = 0.0;
  Vec e{1.0, 0.0};
  double lambda_star = 0.0;
  double c_star = 0.0;
  double theta_prime = 0.0;
  Vec e_prime{1.0, 0.0};
  double w_star = 0.0;
  double alpha = 0.0;
  DirectionDiagnostics diag;
};

struct Atlas {
  MuSpec mu_spec;
  int dim = 1;
  int grid_points = 0;
  std::vector<DirectionRecord> records;  // sorted by angle

  double angle_step() const;
};

struct AtlasOptions {
  MinSpeedOptions speed;
  SpreadOptions spread;
  int threads = 1;
  /// Atlas pass tolerance: lambda located to this relative width is enough
  /// for c* values (stationarity); the per-direction minimizer refinement
  /// re-solves at full accuracy.
  double scan_lambda_rtol = 1e-5;
};

/// Sweeps c*, lambda*, e', w*, alpha over the direction grid. Directions are
/// theta_i = 2 pi i / directions (2D) or {+1,-1} (1D). The per-direction
/// work is an independent parallel map; records come back ordered by angle.
Atlas build_atlas(const MuSpec& spec, int grid_points, int directions,
                  const AtlasOptions& opts = {});

struct MinimizerCheck {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct MinimizerReport {
  int directions = 0;
  double angle_step_deg = 0.0;
  bool all_pass = false;
  std::vector<MinimizerCheck> checks;
};

struct MinimizerCheckOptions {
  double uniqueness_margin_rel = 1e-3;  // times w*
  double cluster_tol_deg = 1.0;
  double coverage_gap_steps = 3.0;  // times the atlas angle step
  double grad_step = 5e-3;          // central-difference step for grad c*
  double grad_tol = 1e-2;           // relative error threshold
  MinSpeedOptions speed;            // used for the fresh gradient evaluations
  int threads = 1;
};

/// Sampled numerical check of the minimizer theory on a 2D atlas:
/// (a) uniqueness of the minimizer per direction, (b) injectivity of
/// e -> e', (c) surjectivity proxy via e' coverage, (d) the gradient
/// identity grad c*(e') = w*(e) e via central differences of the
/// homogeneous extension.
MinimizerReport verify_minimizer_theory(const PeriodicScalarField& mu,
                                        const Atlas& atlas,
                                        const MinimizerCheckOptions& opts = {});

}  // namespace kpp
