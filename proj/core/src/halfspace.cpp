#include "kpp/halfspace.hpp"

#include <algorithm>
#include <cmath>

namespace kpp {

namespace {

double wrap_unit(double x) { return x - std::floor(x); }

/// Thomas algorithm; overwrites scratch, solves into x.
void tridiag_solve(const std::vector<double>& lower,
                   const std::vector<double>& diag,
                   const std::vector<double>& upper,
                   const std::vector<double>& rhs, std::vector<double>& cprime,
                   std::vector<double>& dprime, std::vector<double>& x) {
  const std::size_t n = diag.size();
  cprime[0] = upper[0] / diag[0];
  dprime[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - lower[i] * cprime[i - 1];
    cprime[i] = upper[i] / m;
    dprime[i] = (rhs[i] - lower[i] * dprime[i - 1]) / m;
  }
  x[n - 1] = dprime[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = dprime[i] - cprime[i] * x[i + 1];
  }
}

/// Cyclic tridiagonal via Sherman-Morrison on top of the Thomas kernel.
struct CyclicScratch {
  std::vector<double> bb, y, z, u, cp, dp;
  void resize(std::size_t n) {
    bb.resize(n);
    y.resize(n);
    z.resize(n);
    u.resize(n);
    cp.resize(n);
    dp.resize(n);
  }
};

void cyclic_solve(const std::vector<double>& lower,
                  const std::vector<double>& diag,
                  const std::vector<double>& upper,
                  const std::vector<double>& rhs, CyclicScratch& s,
                  std::vector<double>& x) {
  const std::size_t n = diag.size();
  const double alpha_corner = upper[n - 1];  // A[n-1][0]
  const double beta_corner = lower[0];       // A[0][n-1]
  const double gamma = -diag[0];
  s.bb = diag;
  s.bb[0] -= gamma;
  s.bb[n - 1] -= alpha_corner * beta_corner / gamma;
  tridiag_solve(lower, s.bb, upper, rhs, s.cp, s.dp, s.y);
  std::fill(s.u.begin(), s.u.end(), 0.0);
  s.u[0] = gamma;
  s.u[n - 1] = alpha_corner;
  tridiag_solve(lower, s.bb, upper, s.u, s.cp, s.dp, s.z);
  const double vy = s.y[0] + beta_corner / gamma * s.y[n - 1];
  const double vz = s.z[0] + beta_corner / gamma * s.z[n - 1];
  const double factor = vy / (1.0 + vz);
  for (std::size_t i = 0; i < n; ++i) x[i] = s.y[i] - factor * s.z[i];
}

PeriodicScalarField reflect_if(const PeriodicScalarField& f, bool reflect) {
  if (!reflect) return f;
  PeriodicScalarField out(f.grid);
  const int n = f.grid.points;
  for (int i = 0; i < n; ++i) out.at(i) = f.at((n - i) % n);
  return out;
}

double bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

}  // namespace

FrameSetup make_frame_setup(const PeriodicScalarField& mu, const Vec& e,
                            const CellOptions& opts) {
  const CellSolution cs = solve_cell_problem(mu, e, opts);
  FrameSetup fs;
  fs.dim = mu.grid.dim;
  fs.e = cs.e;
  fs.e_prime = cs.e_prime;
  fs.c_star = cs.c_star_at_eprime;
  fs.lambda_star = cs.lambda_star;
  fs.w_star = cs.w_star;
  fs.psi = cs.eigen.psi;
  fs.kappa = cs.kappa;
  fs.nu = cs.nu;
  fs.S = cs.S;
  return fs;
}

HalfspaceResult run_log_frame(const FrameSetup& setup,
                              const HalfspaceConfig& config) {
  const int dim = setup.dim;
  const Frame frame = config.frame;
  const double alpha =
      frame.kind == Frame::Kind::Linear ? 0.0 : frame.alpha;
  const double T = frame.kind == Frame::Kind::Linear ? 1.0 : frame.T;
  const double cs = setup.c_star;
  const double ls = setup.lambda_star;

  if (alpha < 0.0) throw DomainError("log frame needs alpha >= 0");
  if (T <= 0.0) throw DomainError("log frame needs T > 0");
  if (cs * T < alpha) {
    throw DomainError("T too small: shifted boundary is not monotone");
  }
  if (!(config.dt > 0.0) || !(config.t_final > config.dt)) {
    throw DomainError("bad time stepping parameters");
  }

  bool reflect = false;
  if (dim == 1) {
    if (std::abs(std::abs(setup.e_prime[0]) - 1.0) > 1e-12) {
      throw DomainError("1D frame needs a unit e'");
    }
    reflect = setup.e_prime[0] < 0.0;
  } else {
    if (std::abs(setup.e_prime[0] - 1.0) > 1e-9 ||
        std::abs(setup.e_prime[1]) > 1e-9) {
      throw DomainError(
          "2D half-space runs require the minimizer along +x; rotate the "
          "medium instead");
    }
  }

  const int ppc = config.points_per_cell;
  if (ppc < 8) throw DomainError("need at least 8 points per unit cell");
  const double h = 1.0 / ppc;
  const int m_xi = static_cast<int>(std::lround(config.xi_max * ppc));
  if (m_xi < 16) throw DomainError("xi_max too small");
  const int n_y = dim == 2 ? config.width_cells * ppc : 1;
  if (dim == 2 && config.width_cells < 2) {
    throw DomainError("2D runs need width_cells >= 2");
  }

  // Frame-aligned periodic coefficients. In 1D with e' = -1 the problem is
  // reflected onto the +x frame; kappa.e' becomes -kappa0(-x).
  PeriodicScalarField drift_xi(setup.kappa.grid);
  PeriodicScalarField drift_y(setup.kappa.grid);
  {
    PeriodicScalarField k0 = reflect_if(setup.kappa.comp[0], reflect);
    for (std::size_t i = 0; i < k0.values.size(); ++i) {
      drift_xi.values[i] = (reflect ? -1.0 : 1.0) * k0.values[i];
    }
    if (dim == 2) drift_y = setup.kappa.comp[1];
  }
  const PeriodicScalarField psi_f = reflect_if(setup.psi, reflect);
  const PeriodicScalarField nu_f = reflect_if(setup.nu, reflect);

  const LatticeSampler samp_kxi(drift_xi, ppc);
  const LatticeSampler samp_ky(drift_y, ppc);
  const LatticeSampler samp_psi(psi_f, ppc);
  const LatticeSampler samp_nu(nu_f, ppc);
  std::vector<double> tab_kxi, tab_ky, tab_psi, tab_nu;

  // State: row-major (y, xi); xi index 0..m_xi with Dirichlet ends.
  const std::size_t nxi = static_cast<std::size_t>(m_xi) + 1;
  std::vector<double> q(static_cast<std::size_t>(n_y) * nxi, 0.0);

  const double ee = dot(setup.e, setup.e_prime);
  if (ee <= 0.0) throw DomainError("e.e' must be positive");

  // Initial data: q0 = v0 e^{lambda* xi} / psi at t=0 (s(0)=0).
  samp_psi.sample(0.0, tab_psi);
  double q_max0 = 0.0;
  for (int iy = 0; iy < n_y; ++iy) {
    const double y = iy * h;
    for (int j = 1; j < m_xi; ++j) {
      const double xi = j * h;
      double r2 = std::pow((xi - config.v0.center) / config.v0.radius, 2);
      if (dim == 2) {
        // centered transversally in the strip
        const double yc = 0.5 * config.width_cells;
        r2 += std::pow((y - yc) / config.v0.radius, 2);
      }
      const double v0 = config.v0.amplitude * bump(std::sqrt(r2));
      if (v0 == 0.0) continue;
      const double psi_here =
          dim == 1 ? tab_psi[j % ppc]
                   : tab_psi[static_cast<std::size_t>(j % ppc) * ppc +
                             (iy % ppc)];
      const double val = v0 * std::exp(ls * xi) / psi_here;
      q[static_cast<std::size_t>(iy) * nxi + j] = val;
      q_max0 = std::max(q_max0, val);
    }
  }
  if (q_max0 == 0.0) {
    throw DomainError("initial data v0 vanishes on the grid");
  }

  HalfspaceResult res;
  res.dim = dim;
  res.h = h;
  res.n_xi = static_cast<int>(nxi);
  res.n_y = n_y;
  res.frame = frame;
  res.c_star = cs;
  res.lambda_star = ls;
  res.w_star = setup.w_star;
  res.t_final = config.t_final;
  res.bulk_max.name = "bulk_max_p";
  res.fixed_offset_p.name = "fixed_offset_p";
  res.w_probe.name = "w_probe";
  res.first_moment.name = "first_moment";

  // Log-spaced record schedule.
  std::vector<double> record_times;
  {
    double t = std::max(config.record_t0, config.dt);
    const double ratio = std::pow(10.0, 1.0 / config.records_per_decade);
    while (t < config.t_final) {
      record_times.push_back(t);
      t *= ratio;
    }
    record_times.push_back(config.t_final);
  }
  const double t_mid_target = config.t_final / 2.0;
  res.t_mid = record_times.front();

  const double growth_exponent = ls * alpha;
  const auto q_at = [&](double xi, double y) -> double {
    const double fj = xi / h;
    int j = static_cast<int>(std::floor(fj));
    j = std::clamp(j, 0, m_xi - 1);
    const double wx = fj - j;
    if (dim == 1) {
      return (1.0 - wx) * q[j] + wx * q[j + 1];
    }
    double fy = y / h;
    fy -= std::floor(fy / n_y) * n_y;
    int iy = static_cast<int>(std::floor(fy)) % n_y;
    const double wy = fy - std::floor(fy);
    const int iy1 = (iy + 1) % n_y;
    return (1.0 - wx) * ((1.0 - wy) * q[static_cast<std::size_t>(iy) * nxi + j] +
                         wy * q[static_cast<std::size_t>(iy1) * nxi + j]) +
           wx * ((1.0 - wy) * q[static_cast<std::size_t>(iy) * nxi + j + 1] +
                 wy * q[static_cast<std::size_t>(iy1) * nxi + j + 1]);
  };

  const double y_center = dim == 2 ? 0.5 * config.width_cells : 0.0;

  const auto record_probes = [&](double t, double s_shift) {
    const double growth = std::pow((t + T) / T, growth_exponent);
    // Prop 3.1 window around sigma sqrt(t) e'.
    const double rt = std::sqrt(t);
    const double lo = std::max(h, (config.sigma - config.rho) * rt);
    const double hi = (config.sigma + config.rho) * rt;
    if (hi > config.xi_max - 2.0 * h) {
      throw DomainExceeded("sqrt(t) probe window left the grid at t=" +
                           std::to_string(t));
    }
    double bulk = 0.0;
    const int jlo = std::max(1, static_cast<int>(std::ceil(lo / h)));
    const int jhi = std::min(m_xi - 1, static_cast<int>(std::floor(hi / h)));
    const double yd = res.w_star * t * setup.e[1];  // transverse drift
    if (dim == 1) {
      for (int j = jlo; j <= jhi; ++j) bulk = std::max(bulk, q[j]);
    } else {
      const double ylo = y_center + yd - config.rho * rt;
      const double yhi = y_center + yd + config.rho * rt;
      for (double yy = ylo; yy <= yhi; yy += h) {
        for (int j = jlo; j <= jhi; ++j) {
          bulk = std::max(bulk, q_at(j * h, yy));
        }
      }
    }
    res.bulk_max.samples.emplace_back(t, bulk);

    const double xi_probe = config.offset_L * ee;
    const double y_probe = y_center + yd;
    const double p_probe = q_at(xi_probe, y_probe);
    res.fixed_offset_p.samples.emplace_back(t, p_probe);

    const double psi_here = sample_at(
        psi_f, {wrap_unit(xi_probe + s_shift), wrap_unit(y_probe)});
    res.w_probe.samples.emplace_back(
        t, growth * std::exp(-ls * xi_probe) * psi_here * p_probe);

    samp_nu.sample(wrap_unit(s_shift), tab_nu);
    double fm = 0.0;
    for (int iy = 0; iy < n_y; ++iy) {
      for (int j = 1; j < m_xi; ++j) {
        const double nu_here =
            dim == 1 ? tab_nu[j % ppc]
                     : tab_nu[static_cast<std::size_t>(j % ppc) * ppc +
                              (iy % ppc)];
        fm += nu_here * (j * h) * q[static_cast<std::size_t>(iy) * nxi + j];
      }
    }
    fm *= dim == 1 ? h : h * h;
    res.first_moment.samples.emplace_back(t, fm);

    if (dim == 2 && config.record_moments) {
      MomentRecord mr;
      mr.t = t;
      for (int iy = 0; iy < n_y; ++iy) {
        double dy = iy * h - (y_center + yd);
        dy -= std::round(dy / n_y / h) * n_y * h;  // wrapped offset
        for (int j = 1; j < m_xi; ++j) {
          const double xi = j * h;
          const double qw = q[static_cast<std::size_t>(iy) * nxi + j] / xi;
          mr.mass += qw;
          mr.m_xixi += xi * xi * qw;
          mr.m_yy += dy * dy * qw;
          mr.m_xiy += xi * dy * qw;
        }
      }
      if (mr.mass > 0) {
        mr.m_xixi /= mr.mass;
        mr.m_yy /= mr.mass;
        mr.m_xiy /= mr.mass;
      }
      res.moments.push_back(mr);
    }

    if (dim == 2) {
      // Strip saturation monitor at the transverse edge of the probe frame.
      double edge = 0.0, peak = 0.0;
      const int iedge =
          static_cast<int>(std::lround((y_center + yd) / h)) + n_y / 2;
      for (int j = 1; j < m_xi; ++j) {
        edge = std::max(edge,
                        std::abs(q[static_cast<std::size_t>(
                                       ((iedge % n_y) + n_y) % n_y) *
                                       nxi +
                                   j]));
      }
      for (double v : q) peak = std::max(peak, std::abs(v));
      res.transverse_edge_max = std::max(res.transverse_edge_max, edge);
      if (peak > 0 && edge > 1e-3 * peak) res.transverse_criterion_binds = true;
    }
  };

  // Time stepping scratch; the interior system size never changes.
  const std::size_t ni = nxi - 2;
  std::vector<double> lower(ni), diag(ni), upper(ni), rhs(ni), sol(ni), cp(ni),
      dp(ni);
  std::vector<double> yl(n_y), ydg(n_y), yu(n_y), yr(n_y), ysol(n_y);
  CyclicScratch cyc;
  if (dim == 2) cyc.resize(n_y);

  std::size_t mid_index = 0;
  for (std::size_t k = 1; k < record_times.size(); ++k) {
    if (std::abs(record_times[k] - t_mid_target) <
        std::abs(record_times[mid_index] - t_mid_target)) {
      mid_index = k;
    }
  }

  const long n_steps = std::lround(config.t_final / config.dt);
  std::size_t next_record = 0;
  double min_value = 0.0;

  for (long n = 1; n <= n_steps; ++n) {
    const double t_new = n * config.dt;
    const double s_shift = cs * t_new - alpha * std::log((t_new + T) / T);
    const double sp = cs - alpha / (t_new + T);
    samp_kxi.sample(wrap_unit(s_shift), tab_kxi);
    if (dim == 2) samp_ky.sample(wrap_unit(s_shift), tab_ky);

    if (dim == 1) {
      // Backward Euler, interior nodes 1..m_xi-1.
      for (std::size_t k = 0; k < ni; ++k) {
        const int j = static_cast<int>(k) + 1;
        const double b = tab_kxi[j % ppc] + sp;
        lower[k] = -config.dt * (1.0 / (h * h) - b / (2.0 * h));
        diag[k] = 1.0 + 2.0 * config.dt / (h * h);
        upper[k] = -config.dt * (1.0 / (h * h) + b / (2.0 * h));
        rhs[k] = q[j];
      }
      tridiag_solve(lower, diag, upper, rhs, cp, dp, sol);
      for (std::size_t k = 0; k < ni; ++k) q[k + 1] = sol[k];
      q[0] = 0.0;
      q[nxi - 1] = 0.0;
    } else {
      // LOD backward Euler: xi sweep then y sweep, both at t_new.
      for (int iy = 0; iy < n_y; ++iy) {
        double* row = &q[static_cast<std::size_t>(iy) * nxi];
        const int ib = iy % ppc;
        for (std::size_t k = 0; k < ni; ++k) {
          const int j = static_cast<int>(k) + 1;
          const double b =
              tab_kxi[static_cast<std::size_t>(j % ppc) * ppc + ib] + sp;
          lower[k] = -config.dt * (1.0 / (h * h) - b / (2.0 * h));
          diag[k] = 1.0 + 2.0 * config.dt / (h * h);
          upper[k] = -config.dt * (1.0 / (h * h) + b / (2.0 * h));
          rhs[k] = row[j];
        }
        tridiag_solve(lower, diag, upper, rhs, cp, dp, sol);
        for (std::size_t k = 0; k < ni; ++k) row[k + 1] = sol[k];
        row[0] = 0.0;
        row[nxi - 1] = 0.0;
      }
      for (int j = 1; j < m_xi; ++j) {
        const int ja = j % ppc;
        for (int iy = 0; iy < n_y; ++iy) {
          const double b =
              tab_ky[static_cast<std::size_t>(ja) * ppc + (iy % ppc)];
          yl[iy] = -config.dt * (1.0 / (h * h) - b / (2.0 * h));
          ydg[iy] = 1.0 + 2.0 * config.dt / (h * h);
          yu[iy] = -config.dt * (1.0 / (h * h) + b / (2.0 * h));
          yr[iy] = q[static_cast<std::size_t>(iy) * nxi + j];
        }
        cyclic_solve(yl, ydg, yu, yr, cyc, ysol);
        for (int iy = 0; iy < n_y; ++iy) {
          q[static_cast<std::size_t>(iy) * nxi + j] = ysol[iy];
        }
      }
    }

    if (next_record < record_times.size() &&
        t_new + 0.5 * config.dt >= record_times[next_record]) {
      double mn = 0.0, mx = 0.0;
      for (double v : q) {
        if (!std::isfinite(v)) {
          throw StabilityViolation("non-finite q at t=" + std::to_string(t_new));
        }
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      min_value = std::min(min_value, mn);
      if (mx > 1.0000001 * q_max0 || mn < -1e-9 * q_max0) {
        throw StabilityViolation("max principle violated at t=" +
                                 std::to_string(t_new));
      }
      record_probes(t_new, s_shift);
      bool hit_mid = false;
      while (next_record < record_times.size() &&
             t_new + 0.5 * config.dt >= record_times[next_record]) {
        hit_mid = hit_mid || next_record == mid_index;
        ++next_record;
      }
      if (hit_mid) {
        res.q_mid = q;
        res.t_mid = t_new;
      }
    }
  }
  res.q_final = q;
  res.min_value = min_value;
  return res;
}

HalfspaceResult run_linear_frame(const FrameSetup& setup,
                                 const HalfspaceConfig& config) {
  HalfspaceConfig c = config;
  c.frame.kind = Frame::Kind::Linear;
  c.frame.alpha = 0.0;
  c.frame.T = 1.0;
  return run_log_frame(setup, c);
}

TailFit check_exponential_tail(const FrameSetup& setup,
                               const HalfspaceConfig& config,
                               const HalfspaceResult& result) {
  const double ls = result.lambda_star;
  const double alpha =
      result.frame.kind == Frame::Kind::Linear ? 0.0 : result.frame.alpha;
  const double T = result.frame.kind == Frame::Kind::Linear ? 1.0
                                                            : result.frame.T;
  const bool reflect = setup.dim == 1 && setup.e_prime[0] < 0.0;
  const PeriodicScalarField psi_f = reflect_if(setup.psi, reflect);

  const auto fit_rate = [&](const std::vector<double>& field,
                            double t) -> std::pair<double, double> {
    const double s_shift =
        result.c_star * t - alpha * std::log((t + T) / T);
    const double growth = std::pow((t + T) / T, ls * alpha);
    const double h = result.h;
    const int nxi = result.n_xi;
    const double yd = result.w_star * t * setup.e[1];
    int row = 0;
    if (result.dim == 2) {
      const double yc = 0.5 * config.width_cells + yd;
      row = static_cast<int>(std::lround(yc / h));
      row = ((row % result.n_y) + result.n_y) % result.n_y;
    }
    std::vector<double> xs, ys, pxs, pys;
    for (int j = 1; j < nxi - 1; ++j) {
      const double xi = j * h;
      const double qv = field[static_cast<std::size_t>(row) * nxi + j];
      if (qv <= 0.0) continue;
      const double psi_here =
          sample_at(psi_f, {wrap_unit(xi + s_shift),
                            result.dim == 2 ? wrap_unit(row * h) : 0.0});
      const double w = growth * std::exp(-ls * xi) * psi_here * qv;
      if (xi >= config.tail_fit_lo && xi <= config.tail_fit_hi) {
        xs.push_back(xi);
        ys.push_back(std::log(w / xi));
      }
      if (xi <= config.prefactor_window) {
        pxs.push_back(xi);
        pys.push_back(growth * psi_here * qv);  // = w e^{lambda* xi}
      }
    }
    if (xs.size() < 4 || pxs.size() < 3) {
      throw DomainError("tail window has too few usable nodes");
    }
    const LinearFit lf = linear_fit(xs, ys);
    const LinearFit pf = linear_fit(pxs, pys);
    return {-lf.slope, pf.r2};
  };

  TailFit tf;
  const auto [rate_final, r2] = fit_rate(result.q_final, result.t_final);
  tf.rate = rate_final;
  tf.prefactor_r2 = r2;
  if (!result.q_mid.empty()) {
    tf.rate_mid = fit_rate(result.q_mid, result.t_mid).first;
  } else {
    tf.rate_mid = rate_final;
  }
  tf.window_lo = config.tail_fit_lo;
  tf.window_hi = config.tail_fit_hi;
  return tf;
}

}  // namespace kpp
