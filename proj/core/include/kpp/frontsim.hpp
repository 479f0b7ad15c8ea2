#pragma once

#include <optional>
#include <vector>

#include "kpp/fit.hpp"
#include "kpp/grid.hpp"

namespace kpp {

struct InitSpec {
  enum class Profile { Indicator, Bump };
  double radius = 1.0;
  double amplitude = 1.0;  // in [0,1]
  Profile profile = Profile::Indicator;
  Vec center{0.0, 0.0};
};

/// Cauchy-problem configuration for u_t = Lap u + mu(x) u (1 - u) from
/// compactly supported data, with homogeneous Dirichlet truncation at
/// |x_i| = domain_half_width.
struct SimConfig {
  int dim = 1;
  double domain_half_width = 200.0;  // integer number of cells
  int points_per_cell = 16;
  double dt = 0.05;
  double t_final = 100.0;
  MuSpec mu = MuSpec::constant(1, 1.0);
  InitSpec init;
  double level = 0.5;  // tracked level m in (0,1)
  std::vector<double> record_times;
  double trace_dt = 1.0;
  /// Ray angles for front tracking; default +x (1D also accepts pi for -x).
  std::vector<double> ray_angles{0.0};
  double boundary_tol = 1e-8;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;  // interior nodes, row-major
};

struct FrontTrace {
  double theta = 0.0;  // ray angle
  Vec e{1.0, 0.0};
  double level = 0.5;
  std::vector<Sample> samples;  // (t, r_m(t)), only once the level exists
};

struct SimResult {
  int dim = 1;
  double h = 0.0;
  int interior_points = 0;  // per axis
  double half_width = 0.0;
  std::vector<Snapshot> snapshots;
  std::vector<FrontTrace> traces;
  double final_edge_max = 0.0;  // boundary contamination monitor
};

/// Strang splitting: exact logistic reaction flow around an exact
/// (sine-spectral) diffusion exponential. Both substeps preserve [0,1] and
/// pointwise ordering. Throws StabilityViolation / BoundaryContamination.
SimResult run_simulation(const SimConfig& config);

/// Outermost radius with u >= m along the ray, refined by linear
/// interpolation between adjacent samples; nullopt when u < m on the ray.
std::optional<double> extract_front(const Snapshot& snap, const SimResult& geom,
                                    double theta, double m);

/// Least-squares fit of r(t) = v t - alpha log t + C (Bramson form).
inline BramsonFit fit_bramson(const FrontTrace& trace, double t_min) {
  return fit_bramson_model(trace.samples, t_min);
}

}  // namespace kpp
