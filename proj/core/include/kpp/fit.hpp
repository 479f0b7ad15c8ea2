#pragma once

#include <utility>
#include <vector>

#include "kpp/errors.hpp"

namespace kpp {

/// One (t, value) sample of a tracked quantity.
using Sample = std::pair<double, double>;

struct BramsonFit {
  double v = 0.0;      // linear speed
  double alpha = 0.0;  // log coefficient, model r = v t - alpha log t + c
  double c = 0.0;
  double rms_residual = 0.0;
  double condition = 0.0;  // of the 3-column design
  double t_min = 0.0;
  double t_max = 0.0;
  int samples = 0;
};

/// Least squares of r(t) = v t - alpha log t + C over samples with t >= t_min.
/// Requires >= 30 samples in the window; throws IllConditioned when log t
/// varies by less than 0.5 over it.
BramsonFit fit_bramson_model(const std::vector<Sample>& trace, double t_min);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double rms_residual = 0.0;  // in log-log coordinates
  double t_min = 0.0;
  double t_max = 0.0;
  int samples = 0;
};

/// Log-log least squares; the window must span at least one decade in t
/// (WindowTooNarrow) and all values must be positive (NonPositiveSample).
PowerLawFit fit_power_law(const std::vector<Sample>& series, double t_min);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kpp
