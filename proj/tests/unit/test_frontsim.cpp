#include <doctest.h>

#include <cmath>

#include "kpp/frontsim.hpp"

using namespace kpp;

namespace {

SimConfig base_config() {
  SimConfig sc;
  sc.dim = 1;
  sc.mu = MuSpec::constant(1, 1.0);
  sc.domain_half_width = 40;
  sc.points_per_cell = 16;
  sc.dt = 0.05;
  sc.t_final = 5.0;
  sc.trace_dt = 1.0;
  sc.record_times = {5.0};
  return sc;
}

}  // namespace

TEST_SUITE("frontsim") {

TEST_CASE("equilibria: u=0 stays 0, u=1 region stays 1") {
  SimConfig sc = base_config();
  sc.init.amplitude = 0.0;
  const SimResult zero = run_simulation(sc);
  for (double v : zero.snapshots[0].u) CHECK(v == 0.0);
  CHECK(zero.traces[0].samples.empty());

  sc.init.amplitude = 1.0;
  sc.init.radius = 25.0;  // big block of ones, boundary far away
  sc.t_final = 2.0;
  sc.record_times = {2.0};
  const SimResult one = run_simulation(sc);
  const int mid = one.interior_points / 2;
  CHECK(one.snapshots[0].u[mid] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("front extraction: plateau edge and interpolated crossing") {
  SimResult geom;
  geom.dim = 1;
  geom.h = 1.0 / 16;
  geom.half_width = 10;
  geom.interior_points = 2 * 10 * 16 - 1;
  Snapshot snap;
  snap.t = 0.0;
  snap.u.assign(geom.interior_points, 0.0);
  // u = 1 on |x| <= 5
  for (int i = 0; i < geom.interior_points; ++i) {
    const double x = -geom.half_width + (i + 1) * geom.h;
    if (std::abs(x) <= 5.0) snap.u[i] = 1.0;
  }
  auto r = extract_front(snap, geom, 0.0, 0.5);
  REQUIRE(r.has_value());
  CHECK(std::abs(*r - 5.0) <= geom.h);

  // linear profile crossing m between nodes: exact interpolation
  for (int i = 0; i < geom.interior_points; ++i) {
    const double x = -geom.half_width + (i + 1) * geom.h;
    snap.u[i] = std::clamp(1.0 - 0.3 * (x + 10.0) / 4.0, 0.0, 1.0);
  }
  r = extract_front(snap, geom, 0.0, 0.85);
  REQUIRE(r.has_value());
  // u(x) = 1 - 0.3 (x+10)/4 = 0.85 at x = -8
  CHECK(*r == doctest::Approx(8.0).epsilon(1e-10));

  // below the level everywhere: none-marker
  std::fill(snap.u.begin(), snap.u.end(), 0.1);
  CHECK(!extract_front(snap, geom, 0.0, 0.5).has_value());
}

TEST_CASE("front advances in time") {
  SimConfig sc = base_config();
  sc.t_final = 12.0;
  sc.record_times = {};
  const SimResult sim = run_simulation(sc);
  const auto& samples = sim.traces[0].samples;
  REQUIRE(samples.size() >= 8);
  CHECK(samples.back().second > samples.front().second + 5.0);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    CHECK(samples[i].first > samples[i - 1].first);
  }
}

TEST_CASE("scheme preserves order between initial data") {
  SimConfig sc = base_config();
  sc.t_final = 3.0;
  sc.record_times = {1.0, 3.0};
  sc.init.radius = 1.0;
  const SimResult small = run_simulation(sc);
  sc.init.radius = 2.0;
  const SimResult big = run_simulation(sc);
  for (std::size_t s = 0; s < small.snapshots.size(); ++s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < small.snapshots[s].u.size(); ++i) {
      worst = std::max(worst,
                       small.snapshots[s].u[i] - big.snapshots[s].u[i]);
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("lattice translation invariance") {
  SimConfig sc = base_config();
  sc.mu = MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}});
  sc.t_final = 4.0;
  sc.record_times = {4.0};
  const SimResult a = run_simulation(sc);
  sc.init.center = {1.0, 0.0};  // shift by one full period
  const SimResult b = run_simulation(sc);
  const int shift = sc.points_per_cell;
  double worst = 0.0;
  for (int i = 0; i + shift < a.interior_points; ++i) {
    const double xa = -a.half_width + (i + 1) * a.h;
    if (std::abs(xa) > 20.0) continue;  // stay away from the boundary
    worst = std::max(worst,
                     std::abs(b.snapshots[0].u[i + shift] - a.snapshots[0].u[i]));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("KPP bound: u stays below the linearized closed form") {
  SimConfig sc = base_config();
  sc.points_per_cell = 32;
  sc.domain_half_width = 30;
  sc.dt = 0.02;
  sc.t_final = 1.0;
  sc.record_times = {1.0};
  const SimResult sim = run_simulation(sc);
  // linearized solution from indicator data: e^t (G_t * 1_{[-1,1]})
  const double t = 1.0;
  double worst = 0.0;
  for (int i = 0; i < sim.interior_points; ++i) {
    const double x = -sim.half_width + (i + 1) * sim.h;
    const double lin =
        std::exp(t) * 0.5 *
        (std::erf((x + 1.0) / std::sqrt(4.0 * t)) -
         std::erf((x - 1.0) / std::sqrt(4.0 * t)));
    worst = std::max(worst, sim.snapshots[0].u[i] - lin);
  }
  // indicator sampling shifts edge mass by O(h), hence the finite allowance
  CHECK(worst <= 2e-2);
}

TEST_CASE("solution bounds and boundary monitoring") {
  SimConfig sc = base_config();
  sc.t_final = 8.0;
  sc.record_times = {8.0};
  const SimResult sim = run_simulation(sc);
  double lo = 1.0, hi = 0.0;
  for (double v : sim.snapshots[0].u) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= -1e-9);
  CHECK(hi <= 1.0 + 1e-9);
  CHECK(sim.final_edge_max <= 1e-8);

  // domain too small for the requested horizon
  SimConfig tiny = base_config();
  tiny.domain_half_width = 8;
  tiny.t_final = 10.0;
  CHECK_THROWS_AS(run_simulation(tiny), BoundaryContamination);

  CHECK_THROWS_AS([] {
    SimConfig bad = base_config();
    bad.dt = -0.1;
    run_simulation(bad);
  }(), DomainError);
}

TEST_CASE("homogeneous front speed approaches 2") {
  SimConfig sc = base_config();
  sc.domain_half_width = 180;
  sc.t_final = 70.0;
  sc.trace_dt = 0.5;
  const SimResult sim = run_simulation(sc);
  const BramsonFit fit = fit_bramson(sim.traces[0], 15.0);
  CHECK(fit.v == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("2D simulation: radial spread and multiple rays") {
  SimConfig sc;
  sc.dim = 2;
  sc.mu = MuSpec::constant(2, 1.0);
  sc.domain_half_width = 14;
  sc.points_per_cell = 8;
  sc.dt = 0.05;
  sc.t_final = 4.0;
  sc.trace_dt = 0.5;
  sc.init.radius = 1.5;
  sc.ray_angles = {0.0, M_PI / 4, M_PI / 2};
  const SimResult sim = run_simulation(sc);
  REQUIRE(sim.traces.size() == 3);
  for (const auto& tr : sim.traces) {
    REQUIRE(!tr.samples.empty());
  }
  // isotropic medium: rays agree
  const double r0 = sim.traces[0].samples.back().second;
  const double r1 = sim.traces[1].samples.back().second;
  const double r2 = sim.traces[2].samples.back().second;
  CHECK(std::abs(r0 - r1) < 0.2);
  CHECK(std::abs(r0 - r2) < 0.2);
}

}  // TEST_SUITE
