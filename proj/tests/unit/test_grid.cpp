#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kpp/grid.hpp"

using namespace kpp;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// Analytic gradient of a trig series, the symbolic oracle for the spectral
// derivative.
double trig_partial(const MuSpec& spec, const Vec& x, int axis) {
  double v = 0.0;
  for (const TrigTerm& t : spec.terms) {
    const double phase =
        two_pi * (t.k[0] * x[0] + (spec.dim == 2 ? t.k[1] * x[1] : 0.0));
    const double kfac = two_pi * t.k[axis];
    v += -t.cos_amp * kfac * std::sin(phase) + t.sin_amp * kfac * std::cos(phase);
  }
  return v;
}
}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TorusGrid(1, 7), DomainError);
  CHECK_THROWS_AS(TorusGrid(1, 4), DomainError);
  CHECK_THROWS_AS(TorusGrid(3, 16), DomainError);
  const TorusGrid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.spacing() * g.points == doctest::Approx(1.0).epsilon(0));
}

TEST_CASE("build_field constant and trig") {
  const TorusGrid g(1, 16);
  const PeriodicScalarField c = build_field(MuSpec::constant(1, 1.0), g);
  for (double v : c.values) CHECK(v == 1.0);

  const MuSpec s = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}});
  const PeriodicScalarField f = build_field(s, g);
  for (int i = 0; i < 16; ++i) {
    CHECK(f.at(i) ==
          doctest::Approx(1.0 + 0.5 * std::sin(two_pi * i / 16.0)).epsilon(1e-14));
  }

  const MuSpec bad = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 1.5, 0.0}});
  CHECK_THROWS_AS(build_field(bad, TorusGrid(1, 64)), NonPositiveMedium);
}

TEST_CASE("spectral derivatives on band-limited fields") {
  const TorusGrid g(1, 32);
  const PeriodicScalarField c = build_field(MuSpec::constant(1, 2.0), g);
  const PeriodicVectorField gc = gradient(c);
  CHECK(gc.comp[0].max_abs() <= 1e-13);

  const MuSpec s = MuSpec::trig(1, 0.0 + 2.0, {TrigTerm{{1, 0}, 0.0, 1.0}});
  const PeriodicScalarField f = build_field(s, g);
  const PeriodicVectorField gf = gradient(f);
  for (int i = 0; i < 32; ++i) {
    CHECK(gf.comp[0].at(i) ==
          doctest::Approx(two_pi * std::cos(two_pi * i / 32.0)).epsilon(1e-12));
  }

  const PeriodicScalarField lf = laplacian(f);
  for (int i = 0; i < 32; ++i) {
    CHECK(lf.at(i) == doctest::Approx(-two_pi * two_pi *
                                      std::sin(two_pi * i / 32.0))
                          .epsilon(1e-11));
  }
}

TEST_CASE("random trig polynomial matches the symbolic gradient oracle") {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2}) {
    std::vector<TrigTerm> terms;
    for (int t = 0; t < 4; ++t) {
      TrigTerm term;
      term.k[0] = static_cast<int>(rng() % 9) - 4;
      term.k[1] = dim == 2 ? static_cast<int>(rng() % 9) - 4 : 0;
      if (term.k[0] == 0 && (dim == 1 || term.k[1] == 0)) term.k[0] = 1;
      term.cos_amp = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
      term.sin_amp = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
      terms.push_back(term);
    }
    const MuSpec spec = MuSpec::trig(dim, 5.0, terms);
    const TorusGrid g(dim, 32);
    const PeriodicScalarField f = build_field(spec, g);
    const PeriodicVectorField grad = gradient(f);
    double worst = 0.0;
    for (int i = 0; i < g.points; ++i) {
      for (int j = 0; j < (dim == 2 ? g.points : 1); ++j) {
        const Vec x{g.coord(i), g.coord(j)};
        for (int axis = 0; axis < dim; ++axis) {
          const double got =
              dim == 1 ? grad.comp[axis].at(i) : grad.comp[axis].at(i, j);
          worst = std::max(worst, std::abs(got - trig_partial(spec, x, axis)));
        }
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("operator identities and linearity") {
  const MuSpec spec = MuSpec::trig(
      2, 3.0, {TrigTerm{{1, 2}, 0.4, -0.2}, TrigTerm{{2, -1}, -0.3, 0.1}});
  const TorusGrid g(2, 32);
  const PeriodicScalarField f = build_field(spec, g);

  // div(grad f) = lap f
  const PeriodicScalarField d = divergence(gradient(f));
  const PeriodicScalarField l = laplacian(f);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    worst = std::max(worst, std::abs(d.values[i] - l.values[i]));
  }
  CHECK(worst < 1e-11);

  // integrate(d_axis f) = 0 (discrete integration by parts)
  const PeriodicVectorField gf = gradient(f);
  CHECK(std::abs(integrate(gf.comp[0])) < 1e-14);
  CHECK(std::abs(integrate(gf.comp[1])) < 1e-14);

  // zero-mean perturbation integrates away
  const MuSpec pert = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.3}});
  const PeriodicScalarField p = build_field(pert, TorusGrid(1, 64));
  CHECK(integrate(p) == doctest::Approx(1.0).epsilon(1e-14));

  // linearity
  const MuSpec spec2 = MuSpec::trig(2, 2.0, {TrigTerm{{0, 1}, 0.5, 0.0}});
  const PeriodicScalarField h = build_field(spec2, g);
  const PeriodicScalarField combo = linear_combination(2.0, f, -3.0, h);
  const PeriodicScalarField lc = laplacian(combo);
  const PeriodicScalarField lf2 = laplacian(f);
  const PeriodicScalarField lh = laplacian(h);
  worst = 0.0;
  for (std::size_t i = 0; i < lc.values.size(); ++i) {
    worst = std::max(worst, std::abs(lc.values[i] - (2.0 * lf2.values[i] -
                                                     3.0 * lh.values[i])));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("trigonometric point sampling and the lattice sampler") {
  const MuSpec spec = MuSpec::trig(
      2, 2.0, {TrigTerm{{1, 0}, 0.3, 0.2}, TrigTerm{{1, -2}, -0.1, 0.25}});
  const TorusGrid g(2, 32);
  const PeriodicScalarField f = build_field(spec, g);

  // Node values reproduced exactly; off-node values match the analytic
  // formula because the field is band-limited.
  CHECK(sample_at(f, {g.coord(3), g.coord(5)}) ==
        doctest::Approx(f.at(3, 5)).epsilon(1e-13));
  CHECK(sample_at(f, {0.137, 0.821}) ==
        doctest::Approx(spec({0.137, 0.821})).epsilon(1e-12));

  const int ppc = 8;
  const LatticeSampler sampler(f, ppc);
  std::vector<double> table;
  const double shift = 0.3941;
  sampler.sample(shift, table);
  for (int a = 0; a < ppc; ++a) {
    for (int b = 0; b < ppc; ++b) {
      const Vec x{a / static_cast<double>(ppc) + shift,
                  b / static_cast<double>(ppc)};
      CHECK(table[a * ppc + b] == doctest::Approx(spec(x)).epsilon(1e-11));
    }
  }

  // 1D sampler
  const MuSpec s1 = MuSpec::trig(1, 1.0, {TrigTerm{{2, 0}, 0.0, 0.4}});
  const PeriodicScalarField f1 = build_field(s1, TorusGrid(1, 64));
  const LatticeSampler sampler1(f1, 16);
  sampler1.sample(0.011, table);
  for (int a = 0; a < 16; ++a) {
    CHECK(table[a] ==
          doctest::Approx(s1({a / 16.0 + 0.011, 0.0})).epsilon(1e-12));
  }
}

}  // TEST_SUITE
