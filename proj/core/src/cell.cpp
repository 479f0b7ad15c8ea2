#include "kpp/cell.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "spectral.hpp"

namespace kpp {

namespace {

/// L* f = Lap f - div(kappa f), spectral derivatives, pointwise products.
PeriodicScalarField apply_adjoint(const PeriodicVectorField& kappa,
                                  const PeriodicScalarField& f) {
  PeriodicScalarField out = laplacian(f);
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    detail::Spectrum s = detail::forward(multiply(kappa.comp[axis], f));
    detail::apply_derivative(s, axis);
    const PeriodicScalarField d = detail::backward(s, f.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] -= d.values[i];
    }
  }
  return out;
}

/// L f = Lap f + kappa . grad f.
PeriodicScalarField apply_drift(const PeriodicVectorField& kappa,
                                const PeriodicScalarField& f) {
  PeriodicScalarField out = laplacian(f);
  const detail::Spectrum base = detail::forward(f);
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    detail::Spectrum s = base;
    detail::apply_derivative(s, axis);
    const PeriodicScalarField d = detail::backward(s, f.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] += kappa.comp[axis].values[i] * d.values[i];
    }
  }
  return out;
}

Eigen::MatrixXd assemble_adjoint(const PeriodicVectorField& kappa) {
  const std::size_t m = kappa.grid.size();
  Eigen::MatrixXd a(m, m);
  PeriodicScalarField unit_field(kappa.grid);
  for (std::size_t j = 0; j < m; ++j) {
    std::fill(unit_field.values.begin(), unit_field.values.end(), 0.0);
    unit_field.values[j] = 1.0;
    const PeriodicScalarField col = apply_adjoint(kappa, unit_field);
    for (std::size_t i = 0; i < m; ++i) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          col.values[i];
    }
  }
  return a;
}

Eigen::MatrixXd assemble_drift(const PeriodicVectorField& kappa) {
  const std::size_t m = kappa.grid.size();
  Eigen::MatrixXd a(m, m);
  PeriodicScalarField unit_field(kappa.grid);
  for (std::size_t j = 0; j < m; ++j) {
    std::fill(unit_field.values.begin(), unit_field.values.end(), 0.0);
    unit_field.values[j] = 1.0;
    const PeriodicScalarField col = apply_drift(kappa, unit_field);
    for (std::size_t i = 0; i < m; ++i) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          col.values[i];
    }
  }
  return a;
}

bool solve_adjoint_bicgstab(const PeriodicVectorField& kappa, double shift,
                            const Vec& kappa_mean, const PeriodicScalarField& b,
                            PeriodicScalarField& x, double rtol, int max_iter) {
  const auto op = [&](const PeriodicScalarField& f) {
    PeriodicScalarField af = apply_adjoint(kappa, f);
    for (std::size_t i = 0; i < af.values.size(); ++i) {
      af.values[i] = shift * f.values[i] - af.values[i];
    }
    return af;
  };
  const auto precond = [&](const PeriodicScalarField& f) {
    detail::Spectrum s = detail::forward(f);
    detail::apply_adjoint_preconditioner(s, kappa_mean, shift);
    return detail::backward(s, f.grid);
  };
  const auto dot_grid = [](const PeriodicScalarField& u,
                           const PeriodicScalarField& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      s += u.values[i] * v.values[i];
    }
    return s;
  };
  const auto norm_grid = [&](const PeriodicScalarField& u) {
    return std::sqrt(dot_grid(u, u));
  };

  const double bnorm = norm_grid(b);
  if (bnorm == 0.0) {
    std::fill(x.values.begin(), x.values.end(), 0.0);
    return true;
  }
  PeriodicScalarField r = op(x);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    r.values[i] = b.values[i] - r.values[i];
  }
  PeriodicScalarField rhat = r;
  PeriodicScalarField p(b.grid), v(b.grid);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double rho1 = dot_grid(rhat, r);
    if (std::abs(rho1) < 1e-300) return false;
    if (it == 0) {
      p = r;
    } else {
      const double beta = (rho1 / rho) * (alpha / omega);
      for (std::size_t i = 0; i < p.values.size(); ++i) {
        p.values[i] = r.values[i] + beta * (p.values[i] - omega * v.values[i]);
      }
    }
    rho = rho1;
    const PeriodicScalarField phat = precond(p);
    v = op(phat);
    const double rv = dot_grid(rhat, v);
    if (std::abs(rv) < 1e-300) return false;
    alpha = rho1 / rv;
    PeriodicScalarField s = r;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      s.values[i] -= alpha * v.values[i];
    }
    if (norm_grid(s) <= rtol * bnorm) {
      for (std::size_t i = 0; i < x.values.size(); ++i) {
        x.values[i] += alpha * phat.values[i];
      }
      return true;
    }
    const PeriodicScalarField shat = precond(s);
    const PeriodicScalarField t = op(shat);
    const double tt = dot_grid(t, t);
    if (tt < 1e-300) return false;
    omega = dot_grid(t, s) / tt;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      x.values[i] += alpha * phat.values[i] + omega * shat.values[i];
    }
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      r.values[i] = s.values[i] - omega * t.values[i];
    }
    if (norm_grid(r) <= rtol * bnorm) return true;
    if (std::abs(omega) < 1e-300) return false;
  }
  return false;
}

}  // namespace

double Matrix2::min_eigenvalue() const {
  if (dim == 1) return m[0][0];
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return 0.5 * (tr - disc);
}

PeriodicVectorField kappa_field(const EigenPair& eigen_at_min) {
  const PeriodicScalarField& psi = eigen_at_min.psi;
  if (psi.min() < 1e-12) {
    throw SignError("psi violates the positivity guard in kappa");
  }
  const PeriodicVectorField grad_psi = gradient(psi);
  PeriodicVectorField kappa(psi.grid);
  for (int axis = 0; axis < psi.grid.dim; ++axis) {
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      kappa.comp[axis].values[i] =
          2.0 * (grad_psi.comp[axis].values[i] / psi.values[i] -
                 eigen_at_min.lambda * eigen_at_min.e[axis]);
    }
  }
  return kappa;
}

double adjoint_residual(const PeriodicScalarField& nu,
                        const PeriodicVectorField& kappa) {
  return apply_adjoint(kappa, nu).max_abs();
}

PeriodicScalarField invariant_density(const PeriodicVectorField& kappa,
                                      const DensityOptions& opts) {
  const TorusGrid grid = kappa.grid;
  const std::size_t m = grid.size();
  const double shift = 1.0;  // principal eigenvalue of L* is 0

  const bool dense_path = m <= 128;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  if (dense_path) {
    Eigen::MatrixXd shifted = -assemble_adjoint(kappa);
    for (std::size_t i = 0; i < m; ++i) {
      shifted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
          shift;
    }
    lu.compute(shifted);
  }
  Vec kappa_mean{integrate(kappa.comp[0]),
                 grid.dim == 2 ? integrate(kappa.comp[1]) : 0.0};

  PeriodicScalarField nu(grid, 1.0);
  for (int it = 1; it <= opts.max_iter; ++it) {
    PeriodicScalarField y(grid);
    if (dense_path) {
      Eigen::Map<const Eigen::VectorXd> b(nu.values.data(),
                                          static_cast<Eigen::Index>(m));
      Eigen::VectorXd sol = lu.solve(b);
      for (std::size_t i = 0; i < m; ++i) {
        y.values[i] = sol(static_cast<Eigen::Index>(i));
      }
    } else {
      y = nu;
      if (!solve_adjoint_bicgstab(kappa, shift, kappa_mean, nu, y, 1e-12,
                                  400)) {
        Eigen::MatrixXd shifted = -assemble_adjoint(kappa);
        for (std::size_t i = 0; i < m; ++i) {
          shifted(static_cast<Eigen::Index>(i),
                  static_cast<Eigen::Index>(i)) += shift;
        }
        Eigen::Map<const Eigen::VectorXd> b(nu.values.data(),
                                            static_cast<Eigen::Index>(m));
        Eigen::VectorXd sol =
            Eigen::PartialPivLU<Eigen::MatrixXd>(shifted).solve(b);
        for (std::size_t i = 0; i < m; ++i) {
          y.values[i] = sol(static_cast<Eigen::Index>(i));
        }
      }
    }
    const double mean = integrate(y);
    if (!(std::abs(mean) > 0.0) || !std::isfinite(mean)) {
      throw NoConvergence("invariant density iteration degenerated", it);
    }
    for (std::size_t i = 0; i < m; ++i) nu.values[i] = y.values[i] / mean;

    const double res = adjoint_residual(nu, kappa);
    if (res <= opts.tol) {
      if (nu.min() <= 0.0) {
        throw SignError("computed null vector of L* is not single-signed");
      }
      return nu;
    }
  }
  throw NoConvergence("invariant density did not reach tolerance",
                      opts.max_iter);
}

DriftResult effective_drift(const PeriodicScalarField& nu,
                            const PeriodicVectorField& kappa) {
  DriftResult out{PeriodicVectorField(nu.grid), {0.0, 0.0}, 0.0};
  const PeriodicVectorField grad_nu = gradient(nu);
  for (int axis = 0; axis < nu.grid.dim; ++axis) {
    for (std::size_t i = 0; i < nu.values.size(); ++i) {
      out.F.comp[axis].values[i] =
          grad_nu.comp[axis].values[i] -
          nu.values[i] * kappa.comp[axis].values[i];
    }
    out.mean[axis] = integrate(out.F.comp[axis]);
  }
  out.div_inf = divergence(out.F).max_abs();
  return out;
}

CorrectorResult correctors(const PeriodicVectorField& kappa,
                           const PeriodicScalarField& nu, double lambda_star,
                           double w_star, const Vec& e,
                           const CorrectorOptions& opts) {
  const TorusGrid grid = kappa.grid;
  const std::size_t m = grid.size();
  const int dim = grid.dim;

  CorrectorResult out;

  // One bordered factorization serves every component: the extra column
  // absorbs the nu-direction, the extra row pins the gauge integral(nu chi)=0.
  Eigen::MatrixXd bm(m + 1, m + 1);
  bm.setZero();
  bm.topLeftCorner(m, m) = assemble_drift(kappa);
  const double invm = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    bm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) =
        nu.values[i];
    bm(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) =
        nu.values[i] * invm;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);

  for (int j = 0; j < dim; ++j) {
    PeriodicScalarField rhs(grid);
    for (std::size_t i = 0; i < m; ++i) {
      rhs.values[i] =
          lambda_star * kappa.comp[j].values[i] + lambda_star * w_star * e[j];
    }
    const double solv = inner(nu, rhs);
    out.solvability[j] = solv;
    if (std::abs(solv) >
        opts.solvability_tol * std::max(1.0, rhs.max_abs())) {
      throw SolvabilityViolation(
          "corrector right-hand side not orthogonal to nu (inconsistent "
          "(w*, e') pair upstream)",
          j, solv);
    }
    Eigen::VectorXd b(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      b(static_cast<Eigen::Index>(i)) = rhs.values[i];
    }
    b(static_cast<Eigen::Index>(m)) = 0.0;
    const Eigen::VectorXd sol = lu.solve(b);

    PeriodicScalarField chi(grid);
    for (std::size_t i = 0; i < m; ++i) {
      chi.values[i] = sol(static_cast<Eigen::Index>(i));
    }
    // Exact gauge after the linear solve.
    const double gauge = inner(nu, chi);
    for (double& v : chi.values) v -= gauge;

    const PeriodicScalarField lchi = apply_drift(kappa, chi);
    double res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      res = std::max(res, std::abs(lchi.values[i] - rhs.values[i]));
    }
    out.residual[j] = res;
    if (res > opts.residual_tol * std::max(1.0, rhs.max_abs())) {
      throw NoConvergence("corrector residual above tolerance", j);
    }
    out.chi[j] = std::move(chi);
  }
  return out;
}

Matrix2 effective_diffusion(const PeriodicScalarField& nu,
                            const std::array<PeriodicScalarField, 2>& chi,
                            double lambda_star, int dim) {
  Matrix2 s;
  s.dim = dim;
  std::array<PeriodicVectorField, 2> grad_chi{PeriodicVectorField(nu.grid),
                                              PeriodicVectorField(nu.grid)};
  for (int j = 0; j < dim; ++j) {
    PeriodicScalarField chit = chi[j];
    for (double& v : chit.values) v /= lambda_star;
    grad_chi[j] = gradient(chit);
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double acc = 0.0;
      const std::size_t m = nu.values.size();
      for (std::size_t p = 0; p < m; ++p) {
        double dotprod = 0.0;
        for (int a = 0; a < dim; ++a) {
          const double gi =
              (a == i ? 1.0 : 0.0) - grad_chi[i].comp[a].values[p];
          const double gj =
              (a == j ? 1.0 : 0.0) - grad_chi[j].comp[a].values[p];
          dotprod += gi * gj;
        }
        acc += nu.values[p] * dotprod;
      }
      s.m[i][j] = acc / static_cast<double>(m);
    }
  }
  if (dim == 1) {
    s.m[0][1] = s.m[1][0] = 0.0;
    s.m[1][1] = 1.0;
  }
  if (s.min_eigenvalue() <= 0.0) {
    throw NotPositiveDefinite(
        "effective diffusion matrix has a non-positive eigenvalue");
  }
  return s;
}

CellSolution solve_cell_problem(const PeriodicScalarField& mu, const Vec& e,
                                const CellOptions& opts) {
  const SpreadResult sr =
      spreading_speed(mu, e, opts.atlas_samples, opts.spread);

  CellSolution cs(mu.grid);
  cs.e = normalized(e);
  cs.e_prime = sr.e_prime;
  cs.theta_prime = sr.theta_prime;
  cs.lambda_star = sr.lambda_star_at_eprime;
  cs.c_star_at_eprime = sr.c_star_at_eprime;
  cs.w_star = sr.w_star;
  cs.eigen = sr.eigen_at_eprime;

  cs.kappa = kappa_field(cs.eigen);
  cs.nu = invariant_density(cs.kappa, opts.density);
  DriftResult drift = effective_drift(cs.nu, cs.kappa);
  cs.F = std::move(drift.F);

  const CorrectorResult cr =
      correctors(cs.kappa, cs.nu, cs.lambda_star, cs.w_star, cs.e,
                 opts.corrector);
  cs.chi = cr.chi;
  cs.S = effective_diffusion(cs.nu, cs.chi, cs.lambda_star, mu.grid.dim);

  cs.identities.nu_mass = integrate(cs.nu);
  cs.identities.f_mean = drift.mean;
  cs.identities.f_mean_error =
      norm({drift.mean[0] - cs.w_star * cs.e[0],
            drift.mean[1] - cs.w_star * cs.e[1]});
  cs.identities.div_f_inf = drift.div_inf;
  cs.identities.solvability = cr.solvability;
  cs.identities.chi_residual = cr.residual;
  return cs;
}

}  // namespace kpp
