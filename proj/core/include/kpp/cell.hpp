#pragma once

#include <array>

#include "kpp/eigenproblem.hpp"
#include "kpp/grid.hpp"
#include "kpp/speed.hpp"

namespace kpp {

/// n x n effective diffusion matrix (only the leading dim x dim block is
/// meaningful).
struct Matrix2 {
  std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};
  int dim = 2;

  double min_eigenvalue() const;
  double asymmetry() const { return std::abs(m[0][1] - m[1][0]); }
};

/// Advective coefficient kappa = 2 (grad psi / psi - lambda* e') of the
/// linearized equation written around the slowest exponential solution
/// along e'. Requires the eigenpair at lambda = lambda*(e').
/// Throws SignError if psi dips below the positivity guard.
PeriodicVectorField kappa_field(const EigenPair& eigen_at_min);

struct DensityOptions {
  double tol = 1e-9;
  int max_iter = 500;
};

/// Positive periodic null function of L* = Lap - div(kappa .), normalized
/// to unit mass. Throws NoConvergence / SignError.
PeriodicScalarField invariant_density(const PeriodicVectorField& kappa,
                                      const DensityOptions& opts = {});

/// inf-norm of L* nu = Lap nu - div(nu kappa); the divergence of F.
double adjoint_residual(const PeriodicScalarField& nu,
                        const PeriodicVectorField& kappa);

struct DriftResult {
  PeriodicVectorField F;
  Vec mean{0.0, 0.0};
  double div_inf = 0.0;  // reported, not raised
};

/// F = grad nu - nu kappa; divergence-free with cell average w*(e) e.
DriftResult effective_drift(const PeriodicScalarField& nu,
                            const PeriodicVectorField& kappa);

struct CorrectorOptions {
  double solvability_tol = 1e-6;
  double residual_tol = 1e-7;
};

struct CorrectorResult {
  std::array<PeriodicScalarField, 2> chi;  // dim entries used
  std::array<double, 2> solvability{0.0, 0.0};
  std::array<double, 2> residual{0.0, 0.0};
};

/// Solves L chi_j = lambda* kappa_j + lambda* w*(e) e_j with the gauge
/// integral(nu chi_j) = 0. The right-hand side must be orthogonal to nu
/// (SolvabilityViolation otherwise); the singular system is solved through
/// a bordered dense factorization.
CorrectorResult correctors(const PeriodicVectorField& kappa,
                           const PeriodicScalarField& nu, double lambda_star,
                           double w_star, const Vec& e,
                           const CorrectorOptions& opts = {});

/// S_ij = integral( nu (e_i - grad chi~_i) . (e_j - grad chi~_j) ) with
/// chi~ = chi / lambda*. Throws NotPositiveDefinite.
Matrix2 effective_diffusion(const PeriodicScalarField& nu,
                            const std::array<PeriodicScalarField, 2>& chi,
                            double lambda_star, int dim);

struct CellIdentities {
  double nu_mass = 0.0;
  Vec f_mean{0.0, 0.0};
  double f_mean_error = 0.0;  // |mean F - w*(e) e|
  double div_f_inf = 0.0;
  std::array<double, 2> solvability{0.0, 0.0};
  std::array<double, 2> chi_residual{0.0, 0.0};
};

struct CellSolution {
  Vec e{1.0, 0.0};
  Vec e_prime{1.0, 0.0};
  double theta_prime = 0.0;
  double lambda_star = 0.0;
  double c_star_at_eprime = 0.0;
  double w_star = 0.0;
  EigenPair eigen;
  PeriodicVectorField kappa;
  PeriodicScalarField nu;
  PeriodicVectorField F;
  std::array<PeriodicScalarField, 2> chi;
  Matrix2 S;
  CellIdentities identities;

  CellSolution(const TorusGrid& g) : kappa(g), nu(g), F(g) {}
};

struct CellOptions {
  SpreadOptions spread;
  DensityOptions density;
  CorrectorOptions corrector;
  std::vector<AngleSample> atlas_samples;  // optional coarse-scan seed
};

/// Full cell-problem pipeline for the direction of interest e:
/// minimizer e', eigenpair at lambda*(e'), kappa, nu, F, correctors and the
/// effective diffusion matrix, with the Lemma identities evaluated.
CellSolution solve_cell_problem(const PeriodicScalarField& mu, const Vec& e,
                                const CellOptions& opts = {});

}  // namespace kpp
