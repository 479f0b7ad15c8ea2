#include "kpp/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "kpp/cell.hpp"
#include "kpp/eigenproblem.hpp"
#include "kpp/frontsim.hpp"
#include "kpp/halfspace.hpp"
#include "kpp/speed.hpp"

namespace kpp {

namespace {

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

/// Medium for the sampled Theorem-1.1 check and the 2D cell identities.
MuSpec two_mode_medium() {
  return MuSpec::trig(2, 1.0,
                      {TrigTerm{{1, 0}, 0.3, 0.0}, TrigTerm{{0, 1}, 0.5, 0.0}});
}

/// Periodic 2D medium for the Gaussian-covariance run; symmetric in y so
/// the minimizer of e = +x is +x itself.
MuSpec covariance_medium() {
  return MuSpec::trig(2, 1.6,
                      {TrigTerm{{1, 0}, 0.8, 0.0}, TrigTerm{{0, 1}, 0.5, 0.0}});
}

MuSpec sin_medium_1d() {
  return MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}});
}

}  // namespace

MuSpec random_trig_medium(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n_terms = 2 + static_cast<int>(rng() % 3);
  std::vector<TrigTerm> terms;
  for (int t = 0; t < n_terms; ++t) {
    TrigTerm term;
    do {
      term.k[0] = static_cast<int>(rng() % 7) - 3;
      term.k[1] = dim == 2 ? static_cast<int>(rng() % 7) - 3 : 0;
    } while (term.k[0] == 0 && (dim == 1 || term.k[1] == 0));
    term.cos_amp = 0.6 * (u01(rng) - 0.5);
    term.sin_amp = 0.6 * (u01(rng) - 0.5);
    terms.push_back(term);
  }
  MuSpec spec = MuSpec::trig(dim, 1.0, terms);
  for (int round = 0; round < 12; ++round) {
    double mn = 1e300;
    const int probe = 64;
    for (int i = 0; i < probe; ++i) {
      for (int j = 0; j < (dim == 2 ? probe : 1); ++j) {
        mn = std::min(mn, spec({i / static_cast<double>(probe),
                                j / static_cast<double>(probe)}));
      }
    }
    if (mn >= 0.25) break;
    const double scale = 0.9 * (spec.offset - 0.25) / (spec.offset - mn);
    for (TrigTerm& t : spec.terms) {
      t.cos_amp *= scale;
      t.sin_amp *= scale;
    }
  }
  return spec;
}

CheckResult criterion_homogeneous_dispersion() {
  Timer timer;
  CheckResult c;
  c.id = "C1";
  c.name = "homogeneous dispersion gamma = lambda^2 + 1";
  const TorusGrid grid(1, 64);
  const PeriodicScalarField mu = build_field(MuSpec::constant(1, 1.0), grid);
  double worst = 0.0;
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const EigenPair p = principal_eigenpair(mu, {1.0, 0.0}, lambda);
    worst = std::max(worst, std::abs(p.gamma - (lambda * lambda + 1.0)));
  }
  c.value = worst;
  c.expected = 0.0;
  c.tolerance = 1e-8;
  c.seconds = timer.seconds();
  c.pass = worst <= c.tolerance && c.seconds < 1.0;
  c.detail = "max |gamma - (lambda^2+1)| over 5 lambdas, " +
             fmt(c.seconds) + " s";
  return c;
}

CheckResult criterion_minimal_speed_constants() {
  Timer timer;
  CheckResult c;
  c.id = "C2";
  c.name = "minimal speeds (2,1) and (4,2) for mu=1, mu=4";
  const TorusGrid grid(1, 64);
  const PeriodicScalarField mu1 = build_field(MuSpec::constant(1, 1.0), grid);
  const PeriodicScalarField mu4 = build_field(MuSpec::constant(1, 4.0), grid);
  const MinSpeedResult r1 = minimal_speed(mu1, {1.0, 0.0});
  const MinSpeedResult r4 = minimal_speed(mu4, {1.0, 0.0});
  const double worst =
      std::max({std::abs(r1.c_star - 2.0), std::abs(r1.lambda_star - 1.0),
                std::abs(r4.c_star - 4.0), std::abs(r4.lambda_star - 2.0)});
  c.value = worst;
  c.expected = 0.0;
  c.tolerance = 1e-6;
  c.seconds = timer.seconds();
  c.pass = worst <= c.tolerance;
  c.detail = "worst |c*-c| or |lambda*-l| over both media";
  return c;
}

CheckResult criterion_oracle_equivalence(std::uint64_t seed) {
  Timer timer;
  CheckResult c;
  c.id = "C3";
  c.name = "iterative eigenpairs match dense eigendecomposition";
  std::mt19937_64 rng(seed * 2654435761u + 17);
  double worst_gamma = 0.0, worst_psi = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = trial < 3 ? 1 : 2;
    const MuSpec spec = random_trig_medium(dim, rng());
    const TorusGrid grid(dim, 32);
    const PeriodicScalarField mu = build_field(spec, grid);
    const double lambda = 0.3 + 2.7 * u01(rng);
    const Vec e = dim == 1 ? Vec{u01(rng) < 0.5 ? 1.0 : -1.0, 0.0}
                           : unit(2.0 * M_PI * u01(rng));
    const EigenPair it = principal_eigenpair(mu, e, lambda);
    const EigenPair de = dense_principal_eigenpair(mu, e, lambda);
    worst_gamma = std::max(worst_gamma, std::abs(it.gamma - de.gamma));
    double dpsi = 0.0;
    for (std::size_t i = 0; i < it.psi.values.size(); ++i) {
      dpsi = std::max(dpsi, std::abs(it.psi.values[i] - de.psi.values[i]));
    }
    worst_psi = std::max(worst_psi, dpsi);
  }
  c.value = std::max(worst_gamma, worst_psi);
  c.expected = 0.0;
  c.tolerance = 1e-5;
  c.seconds = timer.seconds();
  c.pass = worst_gamma <= 1e-6 && worst_psi <= 1e-5 && c.seconds < 30.0;
  c.detail = "worst dgamma " + fmt(worst_gamma) + ", worst dpsi " +
             fmt(worst_psi) + ", " + fmt(c.seconds) + " s";
  return c;
}

CheckResult criterion_cell_identities() {
  Timer timer;
  CheckResult c;
  c.id = "C4";
  c.name = "cell identities: nu mass, div F, mean F = w* e";
  double worst_mass = 0.0, worst_div = 0.0, worst_mean = 0.0;

  {
    const TorusGrid grid(1, 64);
    const PeriodicScalarField mu = build_field(sin_medium_1d(), grid);
    const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});
    worst_mass = std::max(worst_mass, std::abs(cs.identities.nu_mass - 1.0));
    worst_div = std::max(worst_div, cs.identities.div_f_inf);
    worst_mean = std::max(worst_mean, cs.identities.f_mean_error);
  }
  {
    const TorusGrid grid(2, 32);
    const PeriodicScalarField mu = build_field(two_mode_medium(), grid);
    const Vec e = unit(30.0 * M_PI / 180.0);
    const CellSolution cs = solve_cell_problem(mu, e);
    worst_mass = std::max(worst_mass, std::abs(cs.identities.nu_mass - 1.0));
    worst_div = std::max(worst_div, cs.identities.div_f_inf);
    worst_mean = std::max(worst_mean, cs.identities.f_mean_error);
  }
  c.value = worst_mean;
  c.expected = 0.0;
  c.tolerance = 1e-4;
  c.seconds = timer.seconds();
  c.pass = worst_mass <= 1e-12 && worst_div <= 1e-7 && worst_mean <= 1e-4 &&
           c.seconds < 60.0;
  c.detail = "nu mass err " + fmt(worst_mass) + ", divF " + fmt(worst_div) +
             ", |meanF - w*e| " + fmt(worst_mean) + ", " + fmt(c.seconds) +
             " s";
  return c;
}

CheckResult criterion_effective_diffusion(std::uint64_t seed) {
  Timer timer;
  CheckResult c;
  c.id = "C5";
  c.name = "effective diffusion: S = I for mu=1, SPD in general";
  double worst_identity = 0.0;
  double min_eig = 1e300;
  double worst_asym = 0.0;
  for (int dim : {1, 2}) {
    const TorusGrid grid(dim, dim == 1 ? 64 : 32);
    const PeriodicScalarField mu = build_field(MuSpec::constant(dim, 1.0), grid);
    const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        worst_identity = std::max(
            worst_identity, std::abs(cs.S.m[i][j] - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  std::mt19937_64 rng(seed * 97 + 3);
  for (int dim : {1, 2}) {
    const MuSpec spec = random_trig_medium(dim, rng());
    const TorusGrid grid(dim, dim == 1 ? 64 : 32);
    const PeriodicScalarField mu = build_field(spec, grid);
    const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});
    min_eig = std::min(min_eig, cs.S.min_eigenvalue());
    worst_asym = std::max(worst_asym, cs.S.asymmetry());
  }
  c.value = worst_identity;
  c.expected = 0.0;
  c.tolerance = 1e-8;
  c.seconds = timer.seconds();
  c.pass = worst_identity <= 1e-8 && min_eig > 0.0 && worst_asym <= 1e-12;
  c.detail = "|S - I| (mu=1) " + fmt(worst_identity) + ", min eig " +
             fmt(min_eig) + ", asym " + fmt(worst_asym);
  return c;
}

CheckResult criterion_minimizer_theory(int threads) {
  Timer timer;
  CheckResult c;
  c.id = "C6";
  c.name = "Theorem 1.1 sampled check on a 720-direction atlas";
  AtlasOptions ao;
  ao.threads = threads;
  const Atlas atlas = build_atlas(two_mode_medium(), 32, 720, ao);
  const TorusGrid grid(2, 32);
  const PeriodicScalarField mu = build_field(two_mode_medium(), grid);
  MinimizerCheckOptions mo;
  mo.threads = threads;
  const MinimizerReport rep = verify_minimizer_theory(mu, atlas, mo);
  c.seconds = timer.seconds();
  double grad_worst = 0.0, coverage = 0.0;
  bool pass = rep.all_pass;
  std::string detail;
  for (const MinimizerCheck& mc : rep.checks) {
    detail += mc.name + (mc.pass ? " ok" : " FAIL") + " (" + fmt(mc.worst) +
              "/" + fmt(mc.threshold) + "); ";
    if (mc.name == "gradient_identity") grad_worst = mc.worst;
    if (mc.name == "coverage") coverage = mc.worst;
  }
  c.value = grad_worst;
  c.expected = 0.0;
  c.tolerance = 1e-2;
  c.pass = pass && coverage <= 1.5 && c.seconds < 600.0;
  c.detail = detail + fmt(c.seconds) + " s";
  return c;
}

CheckResult criterion_front_speed() {
  Timer timer;
  CheckResult c;
  c.id = "C7";
  c.name = "1D front speed matches c* within 1%";
  const TorusGrid grid(1, 64);
  const PeriodicScalarField mu = build_field(sin_medium_1d(), grid);
  const MinSpeedResult ms = minimal_speed(mu, {1.0, 0.0});

  SimConfig sc;
  sc.dim = 1;
  sc.mu = sin_medium_1d();
  sc.domain_half_width = 1100;
  sc.points_per_cell = 16;
  sc.dt = 0.025;
  sc.t_final = 500.0;
  sc.trace_dt = 1.0;
  sc.level = 0.5;
  sc.init.radius = 1.0;
  sc.init.amplitude = 1.0;
  const SimResult sim = run_simulation(sc);
  const BramsonFit fit = fit_bramson(sim.traces[0], 50.0);

  c.value = std::abs(fit.v / ms.c_star - 1.0);
  c.expected = 0.0;
  c.tolerance = 0.01;
  c.seconds = timer.seconds();
  c.pass = c.value <= c.tolerance && c.seconds < 300.0;
  c.detail = "fitted v " + fmt(fit.v) + " vs c* " + fmt(ms.c_star) + ", " +
             fmt(c.seconds) + " s";
  return c;
}

CheckResult criterion_bramson_1d() {
  Timer timer;
  CheckResult c;
  c.id = "C8";
  c.name = "1D homogeneous Bramson coefficient in [1.0, 2.0]";
  SimConfig sc;
  sc.dim = 1;
  sc.mu = MuSpec::constant(1, 1.0);
  sc.domain_half_width = 4100;
  sc.points_per_cell = 16;
  sc.dt = 0.05;
  sc.t_final = 2000.0;
  sc.trace_dt = 1.0;
  sc.level = 0.5;
  const SimResult sim = run_simulation(sc);
  const BramsonFit fit = fit_bramson(sim.traces[0], 200.0);
  c.value = fit.alpha;
  c.expected = 1.5;
  c.tolerance = 0.5;
  c.seconds = timer.seconds();
  c.pass = fit.alpha >= 1.0 && fit.alpha <= 2.0 && c.seconds < 900.0;
  c.detail = "alpha_fit " + fmt(fit.alpha) + " (target 3/2), v " + fmt(fit.v) +
             ", " + fmt(c.seconds) + " s";
  return c;
}

namespace {

FrameSetup homogeneous_setup_1d() {
  const TorusGrid grid(1, 64);
  const PeriodicScalarField mu = build_field(MuSpec::constant(1, 1.0), grid);
  return make_frame_setup(mu, {1.0, 0.0});
}

}  // namespace

CheckResult criterion_halfspace_decay() {
  Timer timer;
  CheckResult c;
  c.id = "C9";
  c.name = "half-space decay exponents -(n+1)/2 and -(n/2+1), 1D";
  const FrameSetup fs = homogeneous_setup_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 400.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 4000.0;
  const HalfspaceResult hr = run_linear_frame(fs, hc);
  const PowerLawFit bulk = fit_power_law(hr.bulk_max.samples, 100.0);
  const PowerLawFit off = fit_power_law(hr.fixed_offset_p.samples, 100.0);
  const double err_bulk = std::abs(bulk.exponent + 1.0);
  const double err_off = std::abs(off.exponent + 1.5);
  c.value = std::max(err_bulk, err_off);
  c.expected = 0.0;
  c.tolerance = 0.1;
  c.seconds = timer.seconds();
  c.pass = err_bulk <= 0.1 && err_off <= 0.1 && c.seconds < 600.0;
  c.detail = "sqrt(t)-probe exponent " + fmt(bulk.exponent) +
             " (want -1), offset-probe " + fmt(off.exponent) +
             " (want -1.5), " + fmt(c.seconds) + " s";
  return c;
}

CheckResult criterion_log_frame_boundedness() {
  Timer timer;
  CheckResult c;
  c.id = "C10";
  c.name = "log-frame boundedness and wrong-alpha drift, 1D";
  const FrameSetup fs = homogeneous_setup_1d();
  const double alpha_theory =
      bramson_coefficient(1, fs.lambda_star, dot(fs.e, fs.e_prime));

  const auto run_with_alpha = [&](double alpha) {
    HalfspaceConfig hc;
    hc.frame.kind = Frame::Kind::LogShifted;
    hc.frame.alpha = alpha;
    hc.frame.T = 2.0 * alpha_theory / fs.c_star;
    hc.xi_max = 400.0;
    hc.points_per_cell = 16;
    hc.dt = 0.05;
    hc.t_final = 3000.0;
    return run_log_frame(fs, hc);
  };

  const HalfspaceResult exact = run_with_alpha(alpha_theory);
  double lo = 1e300, hi = 0.0;
  for (const auto& [t, v] : exact.w_probe.samples) {
    if (t < 300.0) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double ratio = hi / lo;

  const HalfspaceResult up = run_with_alpha(alpha_theory + 0.5);
  const HalfspaceResult dn = run_with_alpha(alpha_theory - 0.5);
  const double slope_up = fit_power_law(up.w_probe.samples, 300.0).exponent;
  const double slope_dn = fit_power_law(dn.w_probe.samples, 300.0).exponent;
  const double want = fs.lambda_star * 0.5;
  const double err_slope =
      std::max(std::abs(slope_up - want), std::abs(slope_dn + want));

  c.value = ratio;
  c.expected = 1.0;
  c.tolerance = 4.0;
  c.seconds = timer.seconds();
  c.pass = ratio <= 4.0 && err_slope <= 0.2 && c.seconds < 900.0;
  c.detail = "probe ratio over a decade " + fmt(ratio) +
             " (<=4), drift slopes " + fmt(slope_up) + "/" + fmt(slope_dn) +
             " (want +-" + fmt(want) + "), " + fmt(c.seconds) + " s";
  return c;
}

CheckResult criterion_gaussian_covariance() {
  Timer timer;
  CheckResult c;
  c.id = "C11";
  c.name = "2D linear-frame second moments equal 2tS within 10%";
  const TorusGrid grid(2, 32);
  const PeriodicScalarField mu = build_field(covariance_medium(), grid);
  const FrameSetup fs = make_frame_setup(mu, {1.0, 0.0});

  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 128.0;
  hc.points_per_cell = 8;
  hc.width_cells = 128;
  hc.dt = 0.05;
  hc.t_final = 200.0;
  hc.record_moments = true;
  hc.records_per_decade = 20;
  hc.v0.center = 2.0;
  const HalfspaceResult hr = run_linear_frame(fs, hc);

  const MomentRecord& mr = hr.moments.back();
  const double t = mr.t;
  const double s11 = 2.0 * t * fs.S.m[0][0];
  const double s22 = 2.0 * t * fs.S.m[1][1];
  const double cross_scale =
      2.0 * t * std::sqrt(fs.S.m[0][0] * fs.S.m[1][1]);
  const double e11 = std::abs(mr.m_xixi / s11 - 1.0);
  const double e22 = std::abs(mr.m_yy / s22 - 1.0);
  const double e12 =
      std::abs(mr.m_xiy - 2.0 * t * fs.S.m[0][1]) / cross_scale;
  c.value = std::max({e11, e22, e12});
  c.expected = 0.0;
  c.tolerance = 0.1;
  c.seconds = timer.seconds();
  const bool aligned = std::abs(fs.e_prime[0] - 1.0) < 1e-6;
  c.pass = aligned && c.value <= 0.1 && c.seconds < 1800.0;
  c.detail = "rel errors xixi " + fmt(e11) + ", yy " + fmt(e22) + ", xiy " +
             fmt(e12) + " at t=" + fmt(t) +
             (aligned ? "" : "; minimizer not axis-aligned!") + ", " +
             fmt(c.seconds) + " s; S11 " + fmt(fs.S.m[0][0]) + " S22 " +
             fmt(fs.S.m[1][1]);
  return c;
}

namespace {

std::vector<CheckResult> run_quick_suite(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(criterion_homogeneous_dispersion());
  out.push_back(criterion_minimal_speed_constants());

  {
    Timer timer;
    CheckResult c;
    c.id = "Q3";
    c.name = "homogeneous cell solution: nu=1, F=2e, S=I";
    const TorusGrid grid(1, 64);
    const PeriodicScalarField mu = build_field(MuSpec::constant(1, 1.0), grid);
    const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});
    double worst = std::abs(cs.identities.f_mean[0] - 2.0);
    worst = std::max(worst, std::abs(cs.S.m[0][0] - 1.0));
    for (double v : cs.nu.values) worst = std::max(worst, std::abs(v - 1.0));
    c.value = worst;
    c.tolerance = 1e-7;
    c.seconds = timer.seconds();
    c.pass = worst <= c.tolerance;
    c.detail = "worst deviation from the constant-medium identities";
    out.push_back(c);
  }
  {
    Timer timer;
    CheckResult c;
    c.id = "Q4";
    c.name = "Bramson coefficient arithmetic";
    const double worst = std::max(
        {std::abs(bramson_coefficient(1, 1.0, 1.0) - 1.5),
         std::abs(bramson_coefficient(2, 1.0, 1.0) - 2.0),
         std::abs(bramson_coefficient(2, 1.3, 0.9) - 2.0 / 1.17)});
    c.value = worst;
    c.tolerance = 1e-12;
    c.seconds = timer.seconds();
    c.pass = worst <= c.tolerance;
    c.detail = "exact formula values";
    out.push_back(c);
  }
  {
    Timer timer;
    CheckResult c;
    c.id = "Q5";
    c.name = "quick 1D homogeneous front speed";
    SimConfig sc;
    sc.dim = 1;
    sc.mu = MuSpec::constant(1, 1.0);
    sc.domain_half_width = 160;
    sc.points_per_cell = 16;
    sc.dt = 0.05;
    sc.t_final = 60.0;
    sc.trace_dt = 0.5;
    const SimResult sim = run_simulation(sc);
    const BramsonFit fit = fit_bramson(sim.traces[0], 15.0);
    c.value = std::abs(fit.v - 2.0);
    c.tolerance = 0.1;
    c.seconds = timer.seconds();
    c.pass = c.value <= c.tolerance;
    c.detail = "fitted v " + fmt(fit.v) + " vs 2";
    out.push_back(c);
  }
  {
    Timer timer;
    CheckResult c;
    c.id = "Q6";
    c.name = "quick half-space decay exponent";
    const FrameSetup fs = homogeneous_setup_1d();
    HalfspaceConfig hc;
    hc.frame.kind = Frame::Kind::Linear;
    hc.xi_max = 80.0;
    hc.points_per_cell = 16;
    hc.dt = 0.05;
    hc.t_final = 150.0;
    const HalfspaceResult hr = run_linear_frame(fs, hc);
    const PowerLawFit bulk = fit_power_law(hr.bulk_max.samples, 10.0);
    c.value = std::abs(bulk.exponent + 1.0);
    c.tolerance = 0.15;
    c.seconds = timer.seconds();
    c.pass = c.value <= c.tolerance;
    c.detail = "sqrt(t)-probe exponent " + fmt(bulk.exponent) + " (want -1)";
    out.push_back(c);
  }
  {
    Timer timer;
    CheckResult c;
    c.id = "Q7";
    c.name = "seeded dense-oracle eigensolve agreement (1D, N=32)";
    const MuSpec spec = random_trig_medium(1, opts.seed * 1315423911ull + 5);
    const TorusGrid grid(1, 32);
    const PeriodicScalarField mu = build_field(spec, grid);
    const EigenPair it = principal_eigenpair(mu, {1.0, 0.0}, 1.2);
    const EigenPair de = dense_principal_eigenpair(mu, {1.0, 0.0}, 1.2);
    c.value = std::abs(it.gamma - de.gamma);
    c.tolerance = 1e-6;
    c.seconds = timer.seconds();
    c.pass = c.value <= c.tolerance;
    c.detail = "|gamma_iter - gamma_dense|";
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<CheckResult> run_verification_suite(const VerifyOptions& opts) {
  if (opts.quick) return run_quick_suite(opts);
  std::vector<CheckResult> out;
  out.push_back(criterion_homogeneous_dispersion());
  out.push_back(criterion_minimal_speed_constants());
  out.push_back(criterion_oracle_equivalence(opts.seed));
  out.push_back(criterion_cell_identities());
  out.push_back(criterion_effective_diffusion(opts.seed));
  out.push_back(criterion_minimizer_theory(opts.threads));
  out.push_back(criterion_front_speed());
  out.push_back(criterion_bramson_1d());
  out.push_back(criterion_halfspace_decay());
  out.push_back(criterion_log_frame_boundedness());
  out.push_back(criterion_gaussian_covariance());
  return out;
}

}  // namespace kpp
