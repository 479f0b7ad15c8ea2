#include <doctest.h>

#include <cmath>
#include <random>

#include "kpp/fit.hpp"

using namespace kpp;

TEST_SUITE("fit") {

TEST_CASE("bramson model recovered exactly from synthetic data") {
  std::vector<Sample> trace;
  for (int i = 0; i < 200; ++i) {
    const double t = 10.0 + i * 5.0;
    trace.emplace_back(t, 2.0 * t - 1.5 * std::log(t) + 3.0);
  }
  const BramsonFit fit = fit_bramson_model(trace, 10.0);
  CHECK(fit.v == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.alpha == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(fit.c == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(fit.rms_residual < 1e-9);
  CHECK(fit.condition > 1.0);
}

TEST_CASE("bramson fit under uniform noise: Monte-Carlo over 100 draws") {
  std::mt19937_64 rng(19);
  const auto u01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  double worst_v = 0.0, worst_alpha = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    std::vector<Sample> trace;
    for (double t = 100.0; t <= 2000.0; t += 10.0) {
      const double noise = 0.05 * (2.0 * u01() - 1.0);
      trace.emplace_back(t, 2.0 * t - 1.5 * std::log(t) + 3.0 + noise);
    }
    const BramsonFit fit = fit_bramson_model(trace, 100.0);
    worst_v = std::max(worst_v, std::abs(fit.v - 2.0));
    worst_alpha = std::max(worst_alpha, std::abs(fit.alpha - 1.5));
  }
  CHECK(worst_v < 1e-3);
  CHECK(worst_alpha < 0.1);
}

TEST_CASE("bramson fit preconditions") {
  std::vector<Sample> narrow;
  for (int i = 0; i < 50; ++i) {
    const double t = 1000.0 + i;
    narrow.emplace_back(t, 2.0 * t);
  }
  CHECK_THROWS_AS(fit_bramson_model(narrow, 1000.0), IllConditioned);

  std::vector<Sample> few;
  for (int i = 0; i < 10; ++i) few.emplace_back(10.0 + i, 1.0);
  CHECK_THROWS_AS(fit_bramson_model(few, 0.0), DomainError);
}

TEST_CASE("power law fits") {
  std::vector<Sample> series;
  for (double t = 10.0; t <= 1000.0; t *= 1.1) {
    series.emplace_back(t, 7.0 * std::pow(t, -1.5));
  }
  const PowerLawFit fit = fit_power_law(series, 10.0);
  CHECK(fit.exponent == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(7.0).epsilon(1e-12));

  // constant series
  std::vector<Sample> flat;
  for (double t = 5.0; t <= 500.0; t *= 1.2) flat.emplace_back(t, 3.7);
  CHECK(std::abs(fit_power_law(flat, 5.0).exponent) < 1e-12);

  // 2% multiplicative noise: slope recovered within 0.02 over a decade
  std::mt19937_64 rng(4);
  const auto u01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    std::vector<Sample> noisy;
    for (double t = 100.0; t <= 1000.0; t *= 1.05) {
      noisy.emplace_back(t, std::pow(t, -1.0) *
                                (1.0 + 0.02 * (2.0 * u01() - 1.0)));
    }
    worst = std::max(worst,
                     std::abs(fit_power_law(noisy, 100.0).exponent + 1.0));
  }
  CHECK(worst < 0.02);

  // error paths
  std::vector<Sample> nonpos{{10.0, 1.0}, {20.0, -1.0}, {200.0, 1.0}};
  CHECK_THROWS_AS(fit_power_law(nonpos, 0.0), NonPositiveSample);
  std::vector<Sample> narrow{{10.0, 1.0}, {20.0, 0.9}, {30.0, 0.8}};
  CHECK_THROWS_AS(fit_power_law(narrow, 0.0), WindowTooNarrow);
}

TEST_CASE("linear fit with r2") {
  std::vector<double> x{0, 1, 2, 3, 4};
  std::vector<double> y{1, 3, 5, 7, 9};
  const LinearFit f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}

}  // TEST_SUITE
