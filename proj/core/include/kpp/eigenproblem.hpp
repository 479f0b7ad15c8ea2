#pragma once

#include "kpp/grid.hpp"

namespace kpp {

/// Principal eigenpair of the periodic operator
///   A(e,lambda) psi = Lap psi - 2 lambda e.grad psi + (lambda^2 + mu) psi,
/// gamma its principal (largest real part) eigenvalue, psi > 0 with unit
/// mass over the cell.
struct EigenPair {
  Vec e{1.0, 0.0};
  double lambda = 0.0;
  double gamma = 0.0;
  PeriodicScalarField psi;
  double residual = 0.0;  // inf-norm of A psi - gamma psi, scaled by 1+|gamma|
  int iterations = 0;
};

struct EigenOptions {
  double tol = 1e-9;
  int max_iter = 500;
  /// Optional warm start (e.g. the eigenfunction at a nearby lambda).
  const PeriodicScalarField* warm_start = nullptr;
};

/// Applies A(e,lambda) to a field (spectral derivatives, pointwise mu).
PeriodicScalarField apply_linearized_operator(const PeriodicScalarField& mu,
                                              const Vec& e, double lambda,
                                              const PeriodicScalarField& f);

/// Shifted inverse power iteration with shift lambda^2 + max(mu) + 1; the
/// shift dominates the whole spectrum, so the iteration converges to the
/// principal pair. Inner solves are dense LU in 1D and FFT-preconditioned
/// BiCGStab in 2D. Throws NoConvergence / SignError.
EigenPair principal_eigenpair(const PeriodicScalarField& mu, const Vec& e,
                              double lambda, const EigenOptions& opts = {});

/// Full dense eigendecomposition of the discretized operator (LAPACK dgeev);
/// test oracle and fallback for small grids. Throws ComplexLeakage if the
/// dominant eigenvalue is not real within tolerance.
EigenPair dense_principal_eigenpair(const PeriodicScalarField& mu, const Vec& e,
                                    double lambda);

}  // namespace kpp
