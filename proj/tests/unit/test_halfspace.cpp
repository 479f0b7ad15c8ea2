#include <doctest.h>

#include <cmath>

#include "kpp/halfspace.hpp"
#include "kpp/verify.hpp"

using namespace kpp;

namespace {

FrameSetup homogeneous_1d() {
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu = build_field(MuSpec::constant(1, 1.0), g);
  return make_frame_setup(mu, {1.0, 0.0});
}

// Quadrature of the half-line Dirichlet heat kernel (image method) against
// the exact initial data of the tilted variable; for mu = 1 the tilted
// variable solves the pure heat equation in the co-moving frame.
double image_method_value(const HalfspaceConfig& hc, double t, double xi) {
  const double lo = hc.v0.center - hc.v0.radius;
  const double hi = hc.v0.center + hc.v0.radius;
  const int n = 4000;
  const double dh = (hi - lo) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double eta = lo + (i + 0.5) * dh;
    const double s = (eta - hc.v0.center) / hc.v0.radius;
    if (std::abs(s) >= 1.0) continue;
    const double q0 =
        hc.v0.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s)) * std::exp(eta);
    const double gm = std::exp(-(xi - eta) * (xi - eta) / (4.0 * t));
    const double gp = std::exp(-(xi + eta) * (xi + eta) / (4.0 * t));
    acc += q0 * (gm - gp);
  }
  return acc * dh / std::sqrt(4.0 * M_PI * t);
}

}  // namespace

TEST_SUITE("halfspace") {

TEST_CASE("linear frame matches the image-method heat oracle (mu = 1)") {
  const FrameSetup fs = homogeneous_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 60.0;
  hc.points_per_cell = 32;
  hc.dt = 0.01;
  hc.t_final = 50.0;
  hc.offset_L = 5.0;
  hc.records_per_decade = 40;
  const HalfspaceResult hr = run_linear_frame(fs, hc);

  for (const auto& [t, v] : hr.fixed_offset_p.samples) {
    if (t < 10.0) continue;
    const double exact = image_method_value(hc, t, hc.offset_L);
    CHECK(std::abs(v - exact) <= 1e-4 * std::max(1.0, std::abs(exact)));
    CHECK(std::abs(v / exact - 1.0) < 2e-3);
  }
}

TEST_CASE("Dirichlet boundary exact, positivity, max principle") {
  const FrameSetup fs = homogeneous_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 60.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 80.0;
  const HalfspaceResult hr = run_linear_frame(fs, hc);
  CHECK(hr.q_final[0] == 0.0);
  CHECK(hr.min_value >= -1e-12);
}

TEST_CASE("half-space solution sits below the whole-line solution") {
  const FrameSetup fs = homogeneous_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 50.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 20.0;
  const HalfspaceResult hr = run_linear_frame(fs, hc);

  // Whole-line oracle: same backward-Euler diffusion without the absorbing
  // boundary at xi = 0 (domain extended far to the left).
  const double h = hr.h;
  const int pad = 40 * hc.points_per_cell;
  const int n = hr.n_xi + pad;
  std::vector<double> u(n, 0.0), lower(n - 2), diag(n - 2), upper(n - 2),
      rhs(n - 2), cp(n - 2), dp(n - 2);
  for (int j = 0; j < hr.n_xi; ++j) {
    const double xi = j * h;
    const double s = (xi - hc.v0.center) / hc.v0.radius;
    if (std::abs(s) < 1.0) {
      u[pad + j] = std::exp(1.0 - 1.0 / (1.0 - s * s)) * std::exp(xi);
    }
  }
  const long steps = std::lround(hc.t_final / hc.dt);
  for (long step = 0; step < steps; ++step) {
    for (int k = 0; k < n - 2; ++k) {
      lower[k] = -hc.dt / (h * h);
      diag[k] = 1.0 + 2.0 * hc.dt / (h * h);
      upper[k] = -hc.dt / (h * h);
      rhs[k] = u[k + 1];
    }
    // Thomas
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int k = 1; k < n - 2; ++k) {
      const double m = diag[k] - lower[k] * cp[k - 1];
      cp[k] = upper[k] / m;
      dp[k] = (rhs[k] - lower[k] * dp[k - 1]) / m;
    }
    u[n - 2] = dp[n - 3];
    for (int k = n - 4; k >= 0; --k) u[k + 1] = dp[k] - cp[k] * u[k + 2];
  }
  double worst = 0.0;
  for (int j = 1; j < hr.n_xi - 1; ++j) {
    worst = std::max(worst, hr.q_final[j] - u[pad + j]);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("log frame with alpha = 0 reproduces the linear frame exactly") {
  const TorusGrid g(1, 64);
  const PeriodicScalarField mu =
      build_field(MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.0, 0.5}}), g);
  const FrameSetup fs = make_frame_setup(mu, {1.0, 0.0});
  HalfspaceConfig hc;
  hc.xi_max = 50.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 30.0;
  hc.frame.kind = Frame::Kind::Linear;
  const HalfspaceResult lin = run_linear_frame(fs, hc);
  hc.frame.kind = Frame::Kind::LogShifted;
  hc.frame.alpha = 0.0;
  hc.frame.T = 7.0;
  const HalfspaceResult log0 = run_log_frame(fs, hc);
  double worst = 0.0;
  for (std::size_t i = 0; i < lin.q_final.size(); ++i) {
    worst = std::max(worst, std::abs(lin.q_final[i] - log0.q_final[i]));
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("first moment of p stays bounded (homogeneous and periodic)") {
  for (int medium = 0; medium < 2; ++medium) {
    const TorusGrid g(1, 64);
    const PeriodicScalarField mu =
        medium == 0
            ? build_field(MuSpec::constant(1, 1.0), g)
            : build_field(MuSpec::trig(1, 1.0, {TrigTerm{{1, 0}, 0.3, 0.2}}),
                          g);
    const FrameSetup fs = make_frame_setup(mu, {1.0, 0.0});
    HalfspaceConfig hc;
    hc.frame.kind = Frame::Kind::Linear;
    hc.xi_max = 120.0;
    hc.points_per_cell = 16;
    hc.dt = 0.05;
    hc.t_final = 300.0;
    const HalfspaceResult hr = run_linear_frame(fs, hc);
    const double i0 = hr.first_moment.samples.front().second;
    for (const auto& [t, v] : hr.first_moment.samples) {
      CHECK(v / i0 > 1.0 / 3.0);
      CHECK(v / i0 < 3.0);
    }
  }
}

TEST_CASE("exponential tail of the log frame has rate lambda*") {
  const FrameSetup fs = homogeneous_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::LogShifted;
  hc.frame.alpha = 1.5;
  hc.frame.T = 1.5;
  hc.xi_max = 80.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 400.0;
  const HalfspaceResult hr = run_log_frame(fs, hc);
  const TailFit tail = check_exponential_tail(fs, hc, hr);
  CHECK(std::abs(tail.rate - 1.0) <= 0.05);
  CHECK(std::abs(tail.rate - tail.rate_mid) <= 0.02);
  CHECK(tail.prefactor_r2 >= 0.99);
}

TEST_CASE("wrong log shift produces the predicted drift (short run)") {
  const FrameSetup fs = homogeneous_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::LogShifted;
  hc.frame.alpha = 2.0;  // theoretical is 1.5
  hc.frame.T = 1.5;
  hc.xi_max = 120.0;
  hc.points_per_cell = 16;
  hc.dt = 0.05;
  hc.t_final = 800.0;
  const HalfspaceResult hr = run_log_frame(fs, hc);
  const PowerLawFit fit = fit_power_law(hr.w_probe.samples, 60.0);
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.6));
  CHECK(fit.exponent > 0.2);
}

TEST_CASE("2D homogeneous moments match 2 t I") {
  const TorusGrid g(2, 16);
  const PeriodicScalarField mu = build_field(MuSpec::constant(2, 1.0), g);
  CellOptions co;
  co.spread.coarse_angles = 32;
  const FrameSetup fs = make_frame_setup(mu, {1.0, 0.0});
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 48.0;
  hc.points_per_cell = 8;
  hc.width_cells = 48;
  hc.dt = 0.05;
  hc.t_final = 50.0;
  hc.record_moments = true;
  const HalfspaceResult hr = run_linear_frame(fs, hc);
  const MomentRecord& m = hr.moments.back();
  CHECK(m.m_xixi == doctest::Approx(2.0 * m.t).epsilon(0.15));
  CHECK(m.m_yy == doctest::Approx(2.0 * m.t).epsilon(0.15));
  CHECK(std::abs(m.m_xiy) < 0.15 * 2.0 * m.t);
  CHECK(hr.q_final[0] == 0.0);
}

TEST_CASE("probe geometry leaving the grid raises DomainExceeded") {
  const FrameSetup fs = homogeneous_1d();
  HalfspaceConfig hc;
  hc.frame.kind = Frame::Kind::Linear;
  hc.xi_max = 20.0;
  hc.points_per_cell = 8;
  hc.dt = 0.05;
  hc.t_final = 400.0;  // sigma sqrt(t) quickly exceeds xi_max
  CHECK_THROWS_AS(run_linear_frame(fs, hc), DomainExceeded);
}

}  // TEST_SUITE
