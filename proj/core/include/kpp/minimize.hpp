#pragma once

#include <cmath>
#include <utility>

#include "kpp/errors.hpp"

namespace kpp {

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int evals = 0;
};

/// Golden-section minimization on [a,b]; stops when the interval width
/// drops below xtol. Derivative-free and robust to small evaluation noise.
template <typename F>
GoldenResult golden_section_min(F&& f, double a, double b, double xtol) {
  constexpr double invphi = 0.6180339887498949;
  constexpr double invphi2 = 1.0 - invphi;
  GoldenResult res;
  double x1 = a + invphi2 * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  res.evals = 2;
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + invphi2 * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
    ++res.evals;
  }
  if (f1 <= f2) {
    res.x = x1;
    res.fx = f1;
  } else {
    res.x = x2;
    res.fx = f2;
  }
  return res;
}

struct Bracket {
  double a, b, c;
  double fa, fb, fc;
  int evals = 0;
};

/// Expands around x0 until f(b) <= min(f(a), f(c)). The expansion step
/// doubles while walking downhill. Throws BracketFailure when the walk
/// leaves [lo, hi].
template <typename F>
Bracket bracket_minimum(F&& f, double x0, double step, double lo, double hi) {
  if (hi - lo < 2.0 * step) {
    throw BracketFailure("allowed interval narrower than the bracket step");
  }
  x0 = std::min(std::max(x0, lo + step), hi - step);
  Bracket br{x0 - step, x0, x0 + step, 0, 0, 0, 0};
  br.fa = f(br.a);
  br.fb = f(br.b);
  br.fc = f(br.c);
  br.evals = 3;
  double grow = step;
  while (!(br.fb <= br.fa && br.fb <= br.fc)) {
    grow *= 2.0;
    if (br.fa < br.fc) {
      br.c = br.b;
      br.fc = br.fb;
      br.b = br.a;
      br.fb = br.fa;
      br.a = br.b - grow;
      if (br.a < lo) {
        throw BracketFailure("no minimum bracketed before lower bound");
      }
      br.fa = f(br.a);
    } else {
      br.a = br.b;
      br.fa = br.fb;
      br.b = br.c;
      br.fb = br.fc;
      br.c = br.b + grow;
      if (br.c > hi) {
        throw BracketFailure("no minimum bracketed before upper bound");
      }
      br.fc = f(br.c);
    }
    ++br.evals;
  }
  return br;
}

/// Vertex of the parabola through three points; falls back to x2 when the
/// points are collinear.
inline double parabola_vertex(double x1, double f1, double x2, double f2,
                              double x3, double f3) {
  const double d1 = (x2 - x1) * (f2 - f3);
  const double d2 = (x2 - x3) * (f2 - f1);
  const double denom = 2.0 * (d1 - d2);
  if (std::abs(denom) < 1e-300) return x2;
  const double num = (x2 - x1) * d1 - (x2 - x3) * d2;
  return x2 - num / denom;
}

}  // namespace kpp
