#include "kpp/speed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kpp/minimize.hpp"
#include "parallel.hpp"

namespace kpp {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wraps an angle difference into (-pi, pi].
double wrap_angle(double a) {
  a = std::fmod(a, two_pi);
  if (a <= -pi) a += two_pi;
  if (a > pi) a -= two_pi;
  return a;
}

double circ_dist(double a, double b) { return std::abs(wrap_angle(a - b)); }

/// gamma(e, lambda) evaluations with the eigenfunction carried along as a
/// warm start for the next lambda.
class GammaEvaluator {
public:
  GammaEvaluator(const PeriodicScalarField& mu, const Vec& e, double eigen_tol)
      : mu_(mu), e_(e), eigen_tol_(eigen_tol) {}

  void seed(const PeriodicScalarField& psi) {
    warm_ = psi;
    has_warm_ = true;
  }

  double operator()(double lambda) {
    EigenOptions eo;
    eo.tol = eigen_tol_;
    eo.warm_start = has_warm_ ? &warm_ : nullptr;
    last_ = principal_eigenpair(mu_, e_, lambda, eo);
    warm_ = last_.psi;
    has_warm_ = true;
    ++evals_;
    return last_.gamma;
  }

  const EigenPair& last() const { return last_; }
  int evals() const { return evals_; }

private:
  const PeriodicScalarField& mu_;
  Vec e_;
  double eigen_tol_;
  PeriodicScalarField warm_;
  bool has_warm_ = false;
  EigenPair last_;
  int evals_ = 0;
};

}  // namespace

MinSpeedResult minimal_speed(const PeriodicScalarField& mu, const Vec& e,
                             const MinSpeedOptions& opts) {
  const Vec eu = normalized(e);
  GammaEvaluator gamma(mu, eu, opts.eigen_tol);
  if (opts.warm_psi && opts.warm_psi->grid == mu.grid) {
    gamma.seed(*opts.warm_psi);
  }
  const auto speed_of_log = [&](double u) {
    const double lam = std::exp(u);
    return gamma(lam) / lam;
  };

  const double u0 =
      std::log(std::clamp(opts.lambda_hint, opts.lambda_min, opts.lambda_max));
  // Expanding from the hint: small first step when the caller knows the
  // neighbourhood, otherwise one octave.
  const double step = opts.lambda_hint == 1.0 ? std::log(2.0) : std::log(1.05);
  const Bracket br = bracket_minimum(speed_of_log, u0, step,
                                     std::log(opts.lambda_min),
                                     std::log(opts.lambda_max));
  const GoldenResult gr =
      golden_section_min(speed_of_log, br.a, br.c, opts.lambda_rtol);

  MinSpeedResult res;
  res.lambda_star = std::exp(gr.x);
  res.c_star = gamma(res.lambda_star) / res.lambda_star;
  res.eigen_at_min = gamma.last();
  res.bracket_width = br.c - br.a;

  const double delta = 1e-3 * res.lambda_star;
  const double cp = gamma(res.lambda_star + delta) / (res.lambda_star + delta);
  const double cm = gamma(res.lambda_star - delta) / (res.lambda_star - delta);
  res.stationarity = (cp - cm) / (2.0 * delta);
  res.gamma_evals = gamma.evals();
  if (std::abs(res.stationarity) >
      opts.stationarity_tol * std::max(1.0, res.c_star)) {
    throw NoConvergence("gamma/lambda not stationary at the located minimum",
                        res.gamma_evals);
  }
  return res;
}

ExtendedSpeed extended_speed(const PeriodicScalarField& mu, const Vec& v,
                             const MinSpeedOptions& opts) {
  const double r = norm(v);
  if (r == 0.0) throw ZeroVector("extended_speed at the zero vector");
  MinSpeedOptions o = opts;
  o.lambda_hint = std::clamp(opts.lambda_hint * r, opts.lambda_min,
                             opts.lambda_max);
  const MinSpeedResult ms = minimal_speed(mu, normalized(v), o);
  return ExtendedSpeed{r * ms.c_star, ms.lambda_star / r};
}

double bramson_coefficient(int dim, double lambda_star_at_eprime,
                           double cos_angle) {
  if (dim != 1 && dim != 2) throw DomainError("bramson_coefficient: dim");
  if (lambda_star_at_eprime <= 0.0) {
    throw DomainError("bramson_coefficient: lambda* must be positive");
  }
  if (cos_angle <= 0.0) {
    throw DomainError("bramson_coefficient: e.e' must be positive");
  }
  return (dim / 2.0 + 1.0) / (lambda_star_at_eprime * cos_angle);
}

SpreadResult spreading_speed(const PeriodicScalarField& mu, const Vec& e,
                             const std::vector<AngleSample>& atlas_samples,
                             const SpreadOptions& opts) {
  const Vec eu = normalized(e);
  SpreadResult res;

  if (mu.grid.dim == 1) {
    // S^0 intersected with {e.eb > 0} is {e} itself.
    MinSpeedOptions so = opts.speed;
    const MinSpeedResult ms = minimal_speed(mu, eu, so);
    res.w_star = ms.c_star;
    res.theta_prime = eu[0] > 0 ? 0.0 : pi;
    res.e_prime = eu;
    res.c_star_at_eprime = ms.c_star;
    res.lambda_star_at_eprime = ms.lambda_star;
    res.eigen_at_eprime = ms.eigen_at_min;
    res.c_star_evals = 1;
    return res;
  }

  const double theta_e = std::atan2(eu[1], eu[0]);

  // Rolling lambda hint keeps the inner minimizations on a short leash.
  double lambda_hint = opts.speed.lambda_hint;
  int evals = 0;
  const double scan_rtol = std::max(opts.speed.lambda_rtol, 1e-5);
  const auto objective = [&](double theta) {
    const double cosang = std::cos(wrap_angle(theta - theta_e));
    if (cosang <= 1e-12) return 1e300;  // outside the open half-sphere
    MinSpeedOptions so = opts.speed;
    so.lambda_hint = lambda_hint;
    so.lambda_rtol = scan_rtol;
    const MinSpeedResult ms = minimal_speed(mu, unit(theta), so);
    lambda_hint = ms.lambda_star;
    ++evals;
    return ms.c_star / cosang;
  };

  // Coarse location of the argmin, from the atlas when available.
  double best_theta = theta_e;
  double best_g = 1e300;
  double spacing = pi / opts.coarse_angles;
  bool any_admissible = false;
  if (!atlas_samples.empty()) {
    for (const AngleSample& s : atlas_samples) {
      const double cosang = std::cos(wrap_angle(s.theta - theta_e));
      if (cosang <= 1e-12) continue;
      any_admissible = true;
      const double g = s.c_star / cosang;
      if (g < best_g) {
        best_g = g;
        best_theta = s.theta;
        lambda_hint = s.lambda_star;
      }
    }
    if (atlas_samples.size() >= 2) {
      spacing = two_pi / static_cast<double>(atlas_samples.size());
    }
  } else {
    const int k = std::max(opts.coarse_angles, 8);
    spacing = pi / k;
    for (int j = 0; j < k; ++j) {
      const double theta = theta_e - pi / 2.0 + pi * (j + 0.5) / k;
      any_admissible = true;
      const double g = objective(theta);
      if (g < best_g) {
        best_g = g;
        best_theta = theta;
      }
    }
  }
  if (!any_admissible) {
    throw EmptyHalfSphere("no admissible direction in the open half-sphere");
  }

  // Local refinement with fresh eigenproblem solves.
  const double lo =
      std::max(best_theta - spacing, theta_e - pi / 2.0 + 1e-6);
  const double hi = std::min(best_theta + spacing, theta_e + pi / 2.0 - 1e-6);
  const GoldenResult gr = golden_section_min(objective, lo, hi, opts.angle_tol);

  // Parabolic polish: the objective is smooth and the eigensolves are far
  // more accurate than the golden window, so a three-point fit pins the
  // minimizer to ~1e-6 rad.
  const double d = opts.polish_step;
  const double f1 = objective(gr.x - d);
  const double f2 = objective(gr.x);
  const double f3 = objective(gr.x + d);
  double theta_v = parabola_vertex(gr.x - d, f1, gr.x, f2, gr.x + d, f3);
  if (!(theta_v > gr.x - 3 * d && theta_v < gr.x + 3 * d)) theta_v = gr.x;

  MinSpeedOptions final_opts = opts.speed;
  final_opts.lambda_hint = lambda_hint;
  const MinSpeedResult ms = minimal_speed(mu, unit(theta_v), final_opts);
  ++evals;

  res.theta_prime = wrap_angle(theta_v);
  res.e_prime = unit(theta_v);
  res.c_star_at_eprime = ms.c_star;
  res.lambda_star_at_eprime = ms.lambda_star;
  res.eigen_at_eprime = ms.eigen_at_min;
  res.w_star = ms.c_star / std::cos(wrap_angle(theta_v - theta_e));
  res.c_star_evals = evals;
  return res;
}

double Atlas::angle_step() const {
  if (dim == 1 || records.size() < 2) return pi;
  return two_pi / static_cast<double>(records.size());
}

Atlas build_atlas(const MuSpec& spec, int grid_points, int directions,
                  const AtlasOptions& opts) {
  Atlas atlas;
  atlas.mu_spec = spec;
  atlas.dim = spec.dim;
  atlas.grid_points = grid_points;
  const TorusGrid grid(spec.dim, grid_points);
  const PeriodicScalarField mu = build_field(spec, grid);

  if (spec.dim == 1) {
    for (const double sgn : {1.0, -1.0}) {
      DirectionRecord rec;
      rec.theta = sgn > 0 ? 0.0 : pi;
      rec.e = {sgn, 0.0};
      const MinSpeedResult ms = minimal_speed(mu, rec.e, opts.speed);
      rec.c_star = ms.c_star;
      rec.lambda_star = ms.lambda_star;
      rec.theta_prime = rec.theta;
      rec.e_prime = rec.e;
      rec.w_star = ms.c_star;
      rec.alpha = bramson_coefficient(1, ms.lambda_star, 1.0);
      rec.diag.bracket_width = ms.bracket_width;
      rec.diag.gamma_evals = ms.gamma_evals;
      atlas.records.push_back(std::move(rec));
    }
    return atlas;
  }

  if (directions < 8) throw DomainError("2D atlas needs >= 8 directions");
  atlas.records.resize(directions);

  // Pass 1: minimal speeds on the direction grid.
  detail::parallel_for(directions, opts.threads, [&](int i) {
    DirectionRecord& rec = atlas.records[i];
    rec.theta = two_pi * i / directions;
    rec.e = unit(rec.theta);
    const MinSpeedResult ms = minimal_speed(mu, rec.e, opts.speed);
    rec.c_star = ms.c_star;
    rec.lambda_star = ms.lambda_star;
    rec.diag.bracket_width = ms.bracket_width;
    rec.diag.gamma_evals = ms.gamma_evals;
  });

  std::vector<AngleSample> samples(directions);
  for (int i = 0; i < directions; ++i) {
    samples[i] = {atlas.records[i].theta, atlas.records[i].c_star,
                  atlas.records[i].lambda_star};
  }

  // Pass 2: minimizing directions, spreading speeds, Bramson coefficients.
  SpreadOptions sp = opts.spread;
  sp.speed = opts.speed;
  detail::parallel_for(directions, opts.threads, [&](int i) {
    DirectionRecord& rec = atlas.records[i];
    SpreadOptions local = sp;
    local.speed.lambda_hint = rec.lambda_star;
    const SpreadResult sr = spreading_speed(mu, rec.e, samples, local);
    rec.theta_prime = sr.theta_prime;
    rec.e_prime = sr.e_prime;
    rec.w_star = sr.w_star;
    rec.alpha = bramson_coefficient(2, sr.lambda_star_at_eprime,
                                    dot(rec.e, sr.e_prime));
    rec.diag.refine_evals = sr.c_star_evals;
    if (!(rec.c_star > 0.0) || !(rec.w_star <= rec.c_star + 1e-9) ||
        !(dot(rec.e, rec.e_prime) > 0.0) || !(rec.alpha > 0.0)) {
      throw Error("atlas record violates its invariants at theta=" +
                  std::to_string(rec.theta));
    }
  });

  return atlas;
}

MinimizerReport verify_minimizer_theory(const PeriodicScalarField& mu,
                                        const Atlas& atlas,
                                        const MinimizerCheckOptions& opts) {
  if (atlas.dim != 2) {
    throw DomainError("minimizer theory check needs a 2D atlas");
  }
  const int d = static_cast<int>(atlas.records.size());
  if (d < 8) throw DomainError("minimizer theory check needs >= 8 directions");

  MinimizerReport rep;
  rep.directions = d;
  const double step = atlas.angle_step();
  rep.angle_step_deg = step * 180.0 / pi;
  const double cluster_tol = opts.cluster_tol_deg * pi / 180.0;

  // (a) uniqueness: every near-optimal local minimum of c*(eb)/(e.eb) lies
  // in one angular cluster around theta'.
  {
    double worst = 0.0;
    int worst_dir = 0;
    for (int i = 0; i < d; ++i) {
      const DirectionRecord& rec = atlas.records[i];
      const double margin = opts.uniqueness_margin_rel * rec.w_star;
      for (int j = 0; j < d; ++j) {
        const double cj = std::cos(wrap_angle(atlas.records[j].theta - rec.theta));
        if (cj <= 1e-9) continue;
        const double gj = atlas.records[j].c_star / cj;
        if (gj > rec.w_star + margin) continue;
        // neighbours on the circular grid
        const auto g_at = [&](int k) {
          const int kk = (k % d + d) % d;
          const double ck =
              std::cos(wrap_angle(atlas.records[kk].theta - rec.theta));
          return ck <= 1e-9 ? 1e300 : atlas.records[kk].c_star / ck;
        };
        if (gj <= g_at(j - 1) && gj <= g_at(j + 1)) {
          const double dist = circ_dist(atlas.records[j].theta, rec.theta_prime);
          if (dist > worst) {
            worst = dist;
            worst_dir = i;
          }
        }
      }
    }
    MinimizerCheck c;
    c.name = "uniqueness";
    c.worst = worst * 180.0 / pi;
    c.threshold = opts.cluster_tol_deg;
    c.pass = worst <= cluster_tol;
    c.detail = "max angular distance of near-optimal local minima from "
               "theta' (deg), worst at direction index " +
               std::to_string(worst_dir);
    rep.checks.push_back(c);
  }

  // (b) injectivity of e -> e' at the sampled resolution.
  {
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double de = circ_dist(atlas.records[i].theta, atlas.records[j].theta);
        const double dp =
            circ_dist(atlas.records[i].theta_prime, atlas.records[j].theta_prime);
        if (dp < cluster_tol && de > 2.0 * step) {
          ++violations;
          worst = std::max(worst, de);
        }
      }
    }
    MinimizerCheck c;
    c.name = "injectivity";
    c.worst = static_cast<double>(violations);
    c.threshold = 0.0;
    c.pass = violations == 0;
    c.detail = violations == 0
                   ? "no two separated directions share a minimizer"
                   : "colliding pairs up to " +
                         std::to_string(worst * 180.0 / pi) + " deg apart";
    rep.checks.push_back(c);
  }

  // (c) surjectivity proxy: coverage of S^1 by the sampled e'.
  {
    std::vector<double> tp;
    tp.reserve(d);
    for (const auto& r : atlas.records) {
      double t = std::fmod(r.theta_prime, two_pi);
      if (t < 0) t += two_pi;
      tp.push_back(t);
    }
    std::sort(tp.begin(), tp.end());
    double max_gap = two_pi - tp.back() + tp.front();
    for (int i = 1; i < d; ++i) max_gap = std::max(max_gap, tp[i] - tp[i - 1]);
    MinimizerCheck c;
    c.name = "coverage";
    c.worst = max_gap * 180.0 / pi;
    c.threshold = opts.coverage_gap_steps * rep.angle_step_deg;
    c.pass = max_gap <= opts.coverage_gap_steps * step;
    c.detail = "max angular gap between consecutive minimizers (deg)";
    rep.checks.push_back(c);
  }

  // (d) gradient identity grad c*(e') = w*(e) e, with grad c* from central
  // differences of the homogeneous extension.
  {
    std::vector<double> rel(d, 0.0);
    const double h = opts.grad_step;
    detail::parallel_for(d, opts.threads, [&](int i) {
      const DirectionRecord& rec = atlas.records[i];
      MinSpeedOptions so = opts.speed;
      so.lambda_hint = rec.lambda_star;
      so.lambda_rtol = std::max(so.lambda_rtol, 1e-5);
      Vec g{0.0, 0.0};
      for (int axis = 0; axis < 2; ++axis) {
        Vec vp = rec.e_prime, vm = rec.e_prime;
        vp[axis] += h;
        vm[axis] -= h;
        const double cp = extended_speed(mu, vp, so).c_star;
        const double cm = extended_speed(mu, vm, so).c_star;
        g[axis] = (cp - cm) / (2.0 * h);
      }
      const Vec target{rec.w_star * rec.e[0], rec.w_star * rec.e[1]};
      rel[i] = norm({g[0] - target[0], g[1] - target[1]}) / rec.w_star;
    });
    double worst = 0.0;
    for (double r : rel) worst = std::max(worst, r);
    MinimizerCheck c;
    c.name = "gradient_identity";
    c.worst = worst;
    c.threshold = opts.grad_tol;
    c.pass = worst <= opts.grad_tol;
    c.detail = "max relative error of grad c*(e') vs w*(e) e";
    rep.checks.push_back(c);
  }

  rep.all_pass = true;
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace kpp
