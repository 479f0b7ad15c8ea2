#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "kpp/cell.hpp"
#include "kpp/verify.hpp"

using namespace kpp;

namespace {

// L* f = Lap f - div(kappa f) assembled from the public torus calculus;
// the dense-null-space oracle is independent of the solver internals.
PeriodicScalarField adjoint_apply_public(const PeriodicVectorField& kappa,
                                         const PeriodicScalarField& f) {
  PeriodicVectorField kf(f.grid);
  for (int a = 0; a < f.grid.dim; ++a) {
    kf.comp[a] = multiply(kappa.comp[a], f);
  }
  return linear_combination(1.0, laplacian(f), -1.0, divergence(kf));
}

PeriodicScalarField drift_apply_public(const PeriodicVectorField& kappa,
                                       const PeriodicScalarField& f) {
  const PeriodicVectorField gf = gradient(f);
  PeriodicScalarField out = laplacian(f);
  for (int a = 0; a < f.grid.dim; ++a) {
    const PeriodicScalarField prod = multiply(kappa.comp[a], gf.comp[a]);
    out = linear_combination(1.0, out, 1.0, prod);
  }
  return out;
}

}  // namespace

TEST_SUITE("cell") {

TEST_CASE("constant medium: kappa, nu, F, chi, S are the closed forms") {
  for (int dim : {1, 2}) {
    const TorusGrid g(dim, dim == 1 ? 64 : 16);
    const PeriodicScalarField mu = build_field(MuSpec::constant(dim, 1.0), g);
    CellOptions co;
    co.spread.coarse_angles = 32;
    const Vec e = dim == 1 ? Vec{1.0, 0.0} : unit(0.4);
    const CellSolution cs = solve_cell_problem(mu, e, co);

    CHECK(cs.lambda_star == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cs.w_star == doctest::Approx(2.0).epsilon(1e-7));
    // kappa = -2 lambda* e'
    for (int a = 0; a < dim; ++a) {
      for (double v : cs.kappa.comp[a].values) {
        CHECK(v == doctest::Approx(-2.0 * cs.e_prime[a]).epsilon(1e-6));
      }
    }
    for (double v : cs.nu.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    for (int a = 0; a < dim; ++a) {
      CHECK(cs.identities.f_mean[a] ==
            doctest::Approx(2.0 * cs.e[a]).epsilon(5e-6));
    }
    for (int j = 0; j < dim; ++j) {
      CHECK(cs.chi[j].max_abs() < 1e-6);
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        CHECK(cs.S.m[i][j] ==
              doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("invariant density matches a dense null-space oracle (1D)") {
  const MuSpec spec = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}});
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu = build_field(spec, g);
  const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});

  CHECK(adjoint_residual(cs.nu, cs.kappa) < 1e-8);
  CHECK(std::abs(integrate(cs.nu) - 1.0) < 1e-14);
  CHECK(cs.nu.min() > 0.0);

  // Dense oracle: eigenvector of the assembled L* for its zero eigenvalue.
  const std::size_t m = g.size();
  Eigen::MatrixXd a(m, m);
  PeriodicScalarField unit_field(g);
  for (std::size_t j = 0; j < m; ++j) {
    std::fill(unit_field.values.begin(), unit_field.values.end(), 0.0);
    unit_field.values[j] = 1.0;
    const PeriodicScalarField col = adjoint_apply_public(cs.kappa, unit_field);
    for (std::size_t i = 0; i < m; ++i) a(i, j) = col.values[i];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  int best = 0;
  for (int i = 1; i < static_cast<int>(m); ++i) {
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(best))) {
      best = i;
    }
  }
  CHECK(std::abs(es.eigenvalues()(best)) < 1e-8);
  Eigen::VectorXd nu_oracle = es.eigenvectors().col(best).real();
  nu_oracle /= nu_oracle.mean();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    worst = std::max(worst, std::abs(nu_oracle(i) - cs.nu.values[i]));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("drift identities: div F and mean F (1D exact direction)") {
  const MuSpec spec = MuSpec::trig(
      1, 1.0, {TrigTerm{{1, 0}, 0.2, 0.35}, TrigTerm{{2, 0}, -0.15, 0.0}});
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu = build_field(spec, g);
  const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});
  CHECK(cs.identities.div_f_inf < 1e-8);
  CHECK(cs.identities.f_mean_error < 1e-6);
  // adjoint consistency: integral of nu L phi vanishes for random phi
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TrigTerm> terms;
    for (int t = 0; t < 3; ++t) {
      TrigTerm term;
      term.k[0] = 1 + static_cast<int>(rng() % 5);
      term.cos_amp = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
      term.sin_amp = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
      terms.push_back(term);
    }
    const PeriodicScalarField phi =
        build_field(MuSpec::trig(1, 2.0, terms), g);
    const PeriodicScalarField lphi = drift_apply_public(cs.kappa, phi);
    CHECK(std::abs(inner(cs.nu, lphi)) < 1e-8);
  }
}

TEST_CASE("correctors: solvability, residual, gauge and S two-route oracle") {
  const MuSpec spec = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}});
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu = build_field(spec, g);
  const CellSolution cs = solve_cell_problem(mu, {1.0, 0.0});

  CHECK(std::abs(cs.identities.solvability[0]) < 1e-6);
  CHECK(cs.identities.chi_residual[0] < 1e-7);
  CHECK(std::abs(inner(cs.nu, cs.chi[0])) < 1e-12);

  // Second algebraic route to S through the pre-integration-by-parts form
  // M_ij = integral nu (2 d_i chi~_j + (kappa_i + w* e_i) chi~_j).
  PeriodicScalarField chit = cs.chi[0];
  for (double& v : chit.values) v /= cs.lambda_star;
  const PeriodicVectorField gchit = gradient(chit);
  PeriodicScalarField integrand(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    integrand.values[p] =
        cs.nu.values[p] *
        (2.0 * gchit.comp[0].values[p] +
         (cs.kappa.comp[0].values[p] + cs.w_star * cs.e[0]) * chit.values[p]);
  }
  const double m00 = integrate(integrand);
  const double s_oracle = 1.0 - m00;
  CHECK(std::abs(cs.S.m[0][0] - s_oracle) < 1e-8);
  CHECK(cs.S.m[0][0] > 0.0);

  // Wrong upstream pair must trip the solvability precondition.
  CHECK_THROWS_AS(correctors(cs.kappa, cs.nu, cs.lambda_star,
                             cs.w_star + 0.25, cs.e, CorrectorOptions{}),
                  SolvabilityViolation);
}

TEST_CASE("2D cell solution on a seeded medium keeps its invariants") {
  const MuSpec spec = random_trig_medium(2, 41);
  const TorusGrid g(2, 16);
  const PeriodicScalarField mu = build_field(spec, g);
  CellOptions co;
  co.spread.coarse_angles = 64;
  const CellSolution cs = solve_cell_problem(mu, unit(0.9), co);

  CHECK(std::abs(cs.identities.nu_mass - 1.0) < 1e-13);
  CHECK(cs.nu.min() > 0.0);
  CHECK(cs.identities.div_f_inf < 1e-7);
  CHECK(cs.identities.f_mean_error < 2e-3);  // N=16 pilot resolution
  CHECK(cs.S.asymmetry() < 1e-12);
  CHECK(cs.S.min_eigenvalue() > 0.0);
  CHECK(std::abs(inner(cs.nu, cs.chi[0])) < 1e-12);
  CHECK(std::abs(inner(cs.nu, cs.chi[1])) < 1e-12);
}

}  // TEST_SUITE
