#include "kpp/fit.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

namespace kpp {

BramsonFit fit_bramson_model(const std::vector<Sample>& trace, double t_min) {
  std::vector<Sample> window;
  for (const auto& s : trace) {
    if (s.first >= t_min) window.push_back(s);
  }
  if (window.size() < 30) {
    throw DomainError("bramson fit needs >= 30 samples past t_min");
  }
  double lo = window.front().first, hi = window.front().first;
  for (const auto& s : window) {
    lo = std::min(lo, s.first);
    hi = std::max(hi, s.first);
  }
  if (std::log(hi) - std::log(lo) < 0.5) {
    throw IllConditioned("log t varies by less than 0.5 over the fit window");
  }

  const int n = static_cast<int>(window.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const double t = window[i].first;
    a(i, 0) = t;
    a(i, 1) = -std::log(t);
    a(i, 2) = 1.0;
    b(i) = window[i].second;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const Eigen::VectorXd coef = svd.solve(b);

  BramsonFit fit;
  fit.v = coef(0);
  fit.alpha = coef(1);
  fit.c = coef(2);
  fit.condition = svd.singularValues()(0) /
                  svd.singularValues()(svd.singularValues().size() - 1);
  fit.rms_residual = std::sqrt((a * coef - b).squaredNorm() / n);
  fit.t_min = lo;
  fit.t_max = hi;
  fit.samples = n;
  return fit;
}

PowerLawFit fit_power_law(const std::vector<Sample>& series, double t_min) {
  std::vector<Sample> window;
  for (const auto& s : series) {
    if (s.first >= t_min) window.push_back(s);
  }
  if (window.size() < 3) {
    throw DomainError("power-law fit needs >= 3 samples past t_min");
  }
  double lo = window.front().first, hi = window.front().first;
  for (const auto& s : window) {
    lo = std::min(lo, s.first);
    hi = std::max(hi, s.first);
    if (!(s.second > 0.0)) {
      throw NonPositiveSample("power-law fit requires positive values");
    }
  }
  if (hi / lo < 10.0) {
    throw WindowTooNarrow("power-law window spans less than one decade");
  }

  const int n = static_cast<int>(window.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : window) {
    const double x = std::log(s.first);
    const double y = std::log(s.second);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double inter = (sy - slope * sx) / n;

  PowerLawFit fit;
  fit.exponent = slope;
  fit.prefactor = std::exp(inter);
  double ss = 0.0;
  for (const auto& s : window) {
    const double r = std::log(s.second) - (slope * std::log(s.first) + inter);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.t_min = lo;
  fit.t_max = hi;
  fit.samples = n;
  return fit;
}

LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("linear fit needs matching samples, at least two");
  }
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) {
    throw IllConditioned("degenerate abscissas in linear fit");
  }
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double sst = syy - sy * sy / n;
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    sse += r * r;
  }
  fit.r2 = sst > 0 ? 1.0 - sse / sst : 1.0;
  return fit;
}

}  // namespace kpp
