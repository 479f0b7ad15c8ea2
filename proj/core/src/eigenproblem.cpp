#include "kpp/eigenproblem.hpp"

#include <lapacke.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <vector>

#include "spectral.hpp"

namespace kpp {

namespace {

// Dense spectral differentiation matrices, cached per 1D grid size.
const Eigen::MatrixXd& derivative_matrix_1d(int n, int order) {
  static std::unordered_map<int, std::unique_ptr<Eigen::MatrixXd>> cache;
  const int key = n * 4 + order;
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  TorusGrid grid(1, n);
  auto mat = std::make_unique<Eigen::MatrixXd>(n, n);
  PeriodicScalarField unit_field(grid);
  for (int j = 0; j < n; ++j) {
    std::fill(unit_field.values.begin(), unit_field.values.end(), 0.0);
    unit_field.at(j) = 1.0;
    detail::Spectrum s = detail::forward(unit_field);
    if (order == 1) {
      detail::apply_derivative(s, 0);
    } else {
      detail::apply_laplacian(s);
    }
    const PeriodicScalarField col = detail::backward(s, grid);
    for (int i = 0; i < n; ++i) (*mat)(i, j) = col.at(i);
  }
  auto& ref = *mat;
  cache.emplace(key, std::move(mat));
  return ref;
}

Eigen::MatrixXd assemble_dense_operator(const PeriodicScalarField& mu,
                                        const Vec& e, double lambda) {
  const std::size_t m = mu.grid.size();
  Eigen::MatrixXd a(m, m);
  if (mu.grid.dim == 1) {
    const int n = mu.grid.points;
    const Eigen::MatrixXd& d1 = derivative_matrix_1d(n, 1);
    const Eigen::MatrixXd& d2 = derivative_matrix_1d(n, 2);
    a = d2 - (2.0 * lambda * e[0]) * d1;
    for (int i = 0; i < n; ++i) {
      a(i, i) += lambda * lambda + mu.at(i);
    }
  } else {
    // Column-by-column application of the spectral operator.
    PeriodicScalarField unit_field(mu.grid);
    for (std::size_t j = 0; j < m; ++j) {
      std::fill(unit_field.values.begin(), unit_field.values.end(), 0.0);
      unit_field.values[j] = 1.0;
      const PeriodicScalarField col =
          apply_linearized_operator(mu, e, lambda, unit_field);
      for (std::size_t i = 0; i < m; ++i) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            col.values[i];
      }
    }
  }
  return a;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Preconditioned BiCGStab for (shift - A) x = b with the constant-coefficient
// resolvent as preconditioner. Returns false on breakdown/stagnation.
bool solve_shifted_bicgstab(const PeriodicScalarField& mu, const Vec& e,
                            double lambda, double shift, double mu_mean,
                            const PeriodicScalarField& b,
                            PeriodicScalarField& x, double rtol, int max_iter) {
  const auto op = [&](const PeriodicScalarField& f) {
    PeriodicScalarField af = apply_linearized_operator(mu, e, lambda, f);
    for (std::size_t i = 0; i < af.values.size(); ++i) {
      af.values[i] = shift * f.values[i] - af.values[i];
    }
    return af;
  };
  const auto precond = [&](const PeriodicScalarField& f) {
    detail::Spectrum s = detail::forward(f);
    detail::apply_resolvent_preconditioner(s, e, lambda, mu_mean, shift);
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

PeriodicScalarField apply_linearized_operator(const PeriodicScalarField& mu,
                                              const Vec& e, double lambda,
                                              const PeriodicScalarField& f) {
  detail::Spectrum s = detail::forward(f);
  detail::apply_drift_diffusion(s, e, lambda);
  PeriodicScalarField out = detail::backward(s, f.grid);
  const double l2 = lambda * lambda;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] += (l2 + mu.values[i]) * f.values[i];
  }
  return out;
}

EigenPair principal_eigenpair(const PeriodicScalarField& mu, const Vec& e,
                              double lambda, const EigenOptions& opts) {
  if (lambda <= 0.0) throw DomainError("principal_eigenpair needs lambda > 0");
  if (mu.min() <= 0.0) {
    throw NonPositiveMedium("principal_eigenpair needs a positive medium");
  }
  const TorusGrid grid = mu.grid;
  const std::size_t m = grid.size();
  const double mu_max = mu.max();
  const double mu_mean = integrate(mu);
  const double shift = lambda * lambda + mu_max + 1.0;

  // Dense LU inner solves pay off on small (1D) grids; 2D grids go through
  // the FFT-preconditioned Krylov path.
  const bool dense_path = m <= 128;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  if (dense_path) {
    Eigen::MatrixXd shifted =
        -assemble_dense_operator(mu, e, lambda);
    for (std::size_t i = 0; i < m; ++i) {
      shifted(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
          shift;
    }
    lu.compute(shifted);
  }

  PeriodicScalarField psi =
      opts.warm_start && opts.warm_start->grid == grid
          ? *opts.warm_start
          : PeriodicScalarField(grid, 1.0);
  {
    const double mean = mean_of(psi.values);
    if (std::abs(mean) < 1e-300) {
      std::fill(psi.values.begin(), psi.values.end(), 1.0);
    }
  }

  double theta = lambda * lambda + mu_mean;
  double residual = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    PeriodicScalarField y(grid);
    if (dense_path) {
      Eigen::Map<const Eigen::VectorXd> b(psi.values.data(),
                                          static_cast<Eigen::Index>(m));
      Eigen::VectorXd sol = lu.solve(b);
      for (std::size_t i = 0; i < m; ++i) {
        y.values[i] = sol(static_cast<Eigen::Index>(i));
      }
    } else {
      // Warm initial guess: psi/(shift - theta) is the converged fixed point.
      y = psi;
      const double guess = 1.0 / std::max(shift - theta, 1e-3);
      for (double& v : y.values) v *= guess;
      if (!solve_shifted_bicgstab(mu, e, lambda, shift, mu_mean, psi, y, 1e-12,
                                  300)) {
        // Krylov breakdown: fall back to a dense factorization.
        Eigen::MatrixXd shifted = -assemble_dense_operator(mu, e, lambda);
        for (std::size_t i = 0; i < m; ++i) {
          shifted(static_cast<Eigen::Index>(i),
                  static_cast<Eigen::Index>(i)) += shift;
        }
        Eigen::Map<const Eigen::VectorXd> b(psi.values.data(),
                                            static_cast<Eigen::Index>(m));
        Eigen::VectorXd sol =
            Eigen::PartialPivLU<Eigen::MatrixXd>(shifted).solve(b);
        for (std::size_t i = 0; i < m; ++i) {
          y.values[i] = sol(static_cast<Eigen::Index>(i));
        }
      }
    }

    double nrm = 0.0;
    for (double v : y.values) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw NoConvergence("inverse iteration produced a degenerate vector", it);
    }
    const double sign = mean_of(y.values) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) psi.values[i] = y.values[i] * sign / nrm;

    const PeriodicScalarField apsi =
        apply_linearized_operator(mu, e, lambda, psi);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num += psi.values[i] * apsi.values[i];
      den += psi.values[i] * psi.values[i];
    }
    theta = num / den;
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      residual =
          std::max(residual, std::abs(apsi.values[i] - theta * psi.values[i]));
    }
    residual /= 1.0 + std::abs(theta);
    if (residual <= opts.tol) {
      const double mean = mean_of(psi.values);
      if (mean <= 0.0) {
        throw SignError("principal eigenfunction is not positive");
      }
      for (double& v : psi.values) v /= mean;
      if (psi.min() <= 0.0) {
        throw SignError("principal eigenfunction is not positive");
      }
      EigenPair pair;
      pair.e = e;
      pair.lambda = lambda;
      pair.gamma = theta;
      pair.psi = std::move(psi);
      pair.residual = residual;
      pair.iterations = it;
      return pair;
    }
  }
  throw NoConvergence("principal eigenpair did not reach tolerance " +
                          std::to_string(opts.tol),
                      opts.max_iter);
}

EigenPair dense_principal_eigenpair(const PeriodicScalarField& mu, const Vec& e,
                                    double lambda) {
  const std::size_t m = mu.grid.size();
  Eigen::MatrixXd a = assemble_dense_operator(mu, e, lambda);

  std::vector<double> wr(m), wi(m), vr(m * m);
  // LAPACK expects column-major; pass the transpose and read left-to-right.
  Eigen::MatrixXd acm = a;  // Eigen is column-major already
  const lapack_int info = LAPACKE_dgeev(
      LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(m), acm.data(),
      static_cast<lapack_int>(m), wr.data(), wi.data(), nullptr, 1, vr.data(),
      static_cast<lapack_int>(m));
  if (info != 0) {
    throw NoConvergence("dgeev failed with info " + std::to_string(info),
                        static_cast<int>(info));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (wr[i] > wr[best]) best = i;
  }
  const double scale = std::abs(wr[best]) + 1.0;
  if (std::abs(wi[best]) > 1e-8 * scale) {
    throw ComplexLeakage("dominant eigenvalue has imaginary part " +
                         std::to_string(wi[best]));
  }

  EigenPair pair;
  pair.e = e;
  pair.lambda = lambda;
  pair.gamma = wr[best];
  pair.psi = PeriodicScalarField(mu.grid);
  for (std::size_t i = 0; i < m; ++i) {
    pair.psi.values[i] = vr[best * m + i];
  }
  const double mean = mean_of(pair.psi.values);
  if (std::abs(mean) < 1e-300) {
    throw SignError("dense principal eigenvector has zero mean");
  }
  for (double& v : pair.psi.values) v /= mean;
  if (pair.psi.min() <= 0.0) {
    throw SignError("dense principal eigenvector is not single-signed");
  }
  const PeriodicScalarField apsi =
      apply_linearized_operator(mu, e, lambda, pair.psi);
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    res = std::max(res,
                   std::abs(apsi.values[i] - pair.gamma * pair.psi.values[i]));
  }
  pair.residual = res / (1.0 + std::abs(pair.gamma));
  pair.iterations = 0;
  return pair;
}

}  // namespace kpp
