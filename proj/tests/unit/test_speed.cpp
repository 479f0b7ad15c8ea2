#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kpp/eigenproblem.hpp"
#include "kpp/speed.hpp"
#include "kpp/verify.hpp"

using namespace kpp;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("speed") {

TEST_CASE("constant media speeds and the scaling law") {
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu1 = build_field(MuSpec::constant(1, 1.0), g);
  const MinSpeedResult r1 = minimal_speed(mu1, {1.0, 0.0});
  CHECK(r1.c_star == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r1.lambda_star == doctest::Approx(1.0).epsilon(1e-6));

  const PeriodicScalarField mu4 = build_field(MuSpec::constant(1, 4.0), g);
  const MinSpeedResult r4 = minimal_speed(mu4, {1.0, 0.0});
  CHECK(r4.c_star == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(r4.lambda_star == doctest::Approx(2.0).epsilon(1e-6));

  // mu = c^2 gives (2c, c)
  const PeriodicScalarField muc =
      build_field(MuSpec::constant(1, 1.69), g);
  const MinSpeedResult rc = minimal_speed(muc, {1.0, 0.0});
  CHECK(rc.c_star == doctest::Approx(2.6).epsilon(1e-8));
  CHECK(rc.lambda_star == doctest::Approx(1.3).epsilon(1e-6));
}

TEST_CASE("1D trig medium vs exhaustive lambda-grid oracle") {
  const MuSpec spec = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}});
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu = build_field(spec, g);
  const MinSpeedResult ms = minimal_speed(mu, {1.0, 0.0});

  // Brute force: 10^4 lambda values, log-spaced around the located minimum.
  double best = 1e300;
  EigenOptions eo;
  const PeriodicScalarField* warm = nullptr;
  PeriodicScalarField warm_psi;
  for (int i = 0; i < 10000; ++i) {
    const double lambda = 0.2 * std::pow(100.0, i / 9999.0);  // [0.2, 20]
    eo.warm_start = warm;
    const EigenPair p = principal_eigenpair(mu, {1.0, 0.0}, lambda, eo);
    warm_psi = p.psi;
    warm = &warm_psi;
    best = std::min(best, p.gamma / lambda);
  }
  CHECK(std::abs(ms.c_star - best) < 1e-5);
  CHECK(std::abs(ms.stationarity) < 1e-4);
}

TEST_CASE("extended speed: homogeneity and lambda scaling") {
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu = build_field(MuSpec::constant(1, 1.0), g);
  const ExtendedSpeed es = extended_speed(mu, {3.0, 0.0});
  CHECK(es.c_star == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(es.lambda_star == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK_THROWS_AS(extended_speed(mu, {0.0, 0.0}), ZeroVector);

  // gamma invariance: lambda*(v) c*(v) = gamma(e, lambda*) for unit v
  const MuSpec spec2 = random_trig_medium(2, 77);
  const TorusGrid g2(2, 16);
  const PeriodicScalarField mu2 = build_field(spec2, g2);
  const Vec v{1.4, -0.6};
  const ExtendedSpeed ev = extended_speed(mu2, v);
  const EigenPair at_min = principal_eigenpair(
      mu2, normalized(v), ev.lambda_star * norm(v));
  CHECK(ev.lambda_star * ev.c_star ==
        doctest::Approx(at_min.gamma).epsilon(1e-7));
}

TEST_CASE("spreading speed short-circuits in 1D and for constant media") {
  const TorusGrid g1(1, 64);
  const PeriodicScalarField mu1 =
      build_field(MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.3, 0.0}}), g1);
  const SpreadResult s1 = spreading_speed(mu1, {1.0, 0.0}, {});
  const MinSpeedResult m1 = minimal_speed(mu1, {1.0, 0.0});
  CHECK(s1.w_star == doctest::Approx(m1.c_star).epsilon(1e-10));
  CHECK(s1.e_prime[0] == 1.0);

  const TorusGrid g2(2, 16);
  const PeriodicScalarField mu2 = build_field(MuSpec::constant(2, 1.0), g2);
  SpreadOptions so;
  so.coarse_angles = 64;
  const Vec e = unit(1.1);
  const SpreadResult s2 = spreading_speed(mu2, e, {}, so);
  CHECK(s2.w_star == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(s2.theta_prime - 1.1) < 2e-3);
}

TEST_CASE("2D trig medium vs dense-angle brute force") {
  const MuSpec spec = MuSpec::trig(
      2, 1.0, {TrigTerm{{1, 0}, 0.3, 0.0}, TrigTerm{{0, 1}, 0.5, 0.0}});
  const TorusGrid g(2, 16);
  const PeriodicScalarField mu = build_field(spec, g);
  const Vec e = unit(0.5);

  SpreadOptions so;
  so.coarse_angles = 128;
  const SpreadResult sr = spreading_speed(mu, e, {}, so);

  // Independent dense scan: 4096 angles over the admissible half-circle.
  double best = 1e300, best_theta = 0.0;
  MinSpeedOptions ms;
  ms.lambda_rtol = 1e-6;
  double hint = 1.0;
  for (int i = 0; i < 4096; ++i) {
    const double theta = 0.5 - pi / 2 + pi * (i + 0.5) / 4096.0;
    const double cosang = std::cos(theta - 0.5);
    if (cosang <= 1e-9) continue;
    ms.lambda_hint = hint;
    const MinSpeedResult r = minimal_speed(mu, unit(theta), ms);
    hint = r.lambda_star;
    const double val = r.c_star / cosang;
    if (val < best) {
      best = val;
      best_theta = theta;
    }
  }
  CHECK(std::abs(sr.w_star - best) < 1e-4);
  CHECK(std::abs(sr.theta_prime - best_theta) < 0.1 * pi / 180.0 + pi / 4096.0);
}

TEST_CASE("bramson coefficient formula") {
  CHECK(bramson_coefficient(1, 1.0, 1.0) == doctest::Approx(1.5));
  CHECK(bramson_coefficient(2, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(bramson_coefficient(2, 1.3, 0.9) ==
        doctest::Approx(2.0 / 1.17).epsilon(1e-12));
  CHECK_THROWS_AS(bramson_coefficient(2, -1.0, 0.5), DomainError);
  CHECK_THROWS_AS(bramson_coefficient(2, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bramson_coefficient(3, 1.0, 1.0), DomainError);
}

TEST_CASE("atlas invariants: bounds, lattice symmetry, constant medium") {
  AtlasOptions ao;
  // Constant medium: identity minimizer map.
  const Atlas flat = build_atlas(MuSpec::constant(2, 1.0), 16, 16, ao);
  for (const auto& r : flat.records) {
    CHECK(r.c_star == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(r.w_star == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(std::abs(r.theta_prime - r.theta) < 2e-3);
    CHECK(r.alpha == doctest::Approx(2.0).epsilon(1e-4));
  }

  // Symmetric medium: c*, w* invariant under 90-degree lattice rotation.
  const MuSpec sym = MuSpec::trig(
      2, 1.0, {TrigTerm{{1, 0}, 0.4, 0.0}, TrigTerm{{0, 1}, 0.4, 0.0}});
  const Atlas atlas = build_atlas(sym, 16, 16, ao);
  double min_c = 1e300;
  for (const auto& r : atlas.records) min_c = std::min(min_c, r.c_star);
  for (int i = 0; i < 16; ++i) {
    const auto& a = atlas.records[i];
    const auto& b = atlas.records[(i + 4) % 16];  // rotation by pi/2
    CHECK(a.c_star == doctest::Approx(b.c_star).epsilon(1e-7));
    CHECK(a.w_star == doctest::Approx(b.w_star).epsilon(1e-5));
    // w* admissibility bounds
    CHECK(a.w_star <= a.c_star + 1e-9);
    CHECK(a.w_star >= min_c - 1e-9);
  }
}

TEST_CASE("minimizer report on a small two-mode atlas") {
  const MuSpec spec = MuSpec::trig(
      2, 1.0, {TrigTerm{{1, 0}, 0.3, 0.0}, TrigTerm{{0, 1}, 0.5, 0.0}});
  AtlasOptions ao;
  const Atlas atlas = build_atlas(spec, 16, 90, ao);
  const TorusGrid g(2, 16);
  const PeriodicScalarField mu = build_field(spec, g);
  MinimizerCheckOptions mo;
  mo.cluster_tol_deg = 4.0;  // coarse grid, coarse cluster
  const MinimizerReport rep = verify_minimizer_theory(mu, atlas, mo);
  CHECK(rep.directions == 90);
  for (const auto& c : rep.checks) {
    INFO(c.name, " worst ", c.worst, " threshold ", c.threshold);
    CHECK(c.pass);
  }
}

}  // TEST_SUITE
