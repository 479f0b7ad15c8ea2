#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "kpp/errors.hpp"

namespace kpp {

/// Direction / point in the ambient space; 1D uses only component 0.
using Vec = std::array<double, 2>;

double norm(const Vec& v);
Vec normalized(const Vec& v);
double dot(const Vec& a, const Vec& b);
/// Unit vector at angle theta (2D).
Vec unit(double theta);

/// Uniform grid on the unit torus [0,1)^n, n in {1,2}.
/// Spacing times point count is exactly one cell by construction.
struct TorusGrid {
  TorusGrid(int dim, int points);

  int dim;     // 1 or 2
  int points;  // per axis, power of two, >= 8

  double spacing() const { return 1.0 / points; }
  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(points)
                    : static_cast<std::size_t>(points) * points;
  }
  /// Node coordinate along one axis.
  double coord(int i) const { return i * spacing(); }
  bool operator==(const TorusGrid& o) const {
    return dim == o.dim && points == o.points;
  }
};

/// 1-periodic scalar field sampled at torus grid nodes, row-major over axes
/// (axis 0 slowest). Immutable by convention once built.
struct PeriodicScalarField {
  PeriodicScalarField() : grid(1, 8), values() {}
  explicit PeriodicScalarField(const TorusGrid& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  TorusGrid grid;
  std::vector<double> values;

  double& at(int i) { return values[static_cast<std::size_t>(i)]; }
  double at(int i) const { return values[static_cast<std::size_t>(i)]; }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * grid.points + j];
  }
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * grid.points + j];
  }

  double min() const;
  double max() const;
  double max_abs() const;
};

/// n scalar components sharing one grid.
struct PeriodicVectorField {
  explicit PeriodicVectorField(const TorusGrid& g)
      : grid(g), comp{PeriodicScalarField(g), PeriodicScalarField(g)} {}

  TorusGrid grid;
  std::array<PeriodicScalarField, 2> comp;  // comp[1] unused when dim == 1
};

/// One cosine/sine mode of a trigonometric medium.
struct TrigTerm {
  std::array<int, 2> k{0, 0};  // integer wavevector, k[1] ignored in 1D
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// Analytic description of the periodic medium mu(x).
struct MuSpec {
  enum class Kind { Constant, TrigSeries };

  Kind kind = Kind::Constant;
  int dim = 1;
  double constant_value = 1.0;  // Constant
  double offset = 1.0;          // TrigSeries
  std::vector<TrigTerm> terms;  // TrigSeries

  static MuSpec constant(int dim, double value);
  static MuSpec trig(int dim, double offset, std::vector<TrigTerm> terms);

  /// Pointwise evaluation of the analytic formula.
  double operator()(const Vec& x) const;
};

/// Samples the medium at grid nodes. Throws NonPositiveMedium if the
/// minimum over the grid is <= 0.
PeriodicScalarField build_field(const MuSpec& spec, const TorusGrid& grid);

// Spectral (DFT-based) calculus; exact for band-limited fields.
PeriodicVectorField gradient(const PeriodicScalarField& f);
PeriodicScalarField divergence(const PeriodicVectorField& v);
PeriodicScalarField laplacian(const PeriodicScalarField& f);
/// Mean value times unit cell volume (= mean, the cell has volume 1).
double integrate(const PeriodicScalarField& f);
/// integrate(f * g)
double inner(const PeriodicScalarField& f, const PeriodicScalarField& g);

// Pointwise arithmetic helpers.
PeriodicScalarField multiply(const PeriodicScalarField& f,
                             const PeriodicScalarField& g);
PeriodicScalarField linear_combination(double a, const PeriodicScalarField& f,
                                       double b, const PeriodicScalarField& g);

/// Trigonometric (exact for band-limited data) evaluation at an arbitrary
/// point of the torus.
double sample_at(const PeriodicScalarField& f, const Vec& x);

/// Tabulates a periodic field on the sub-lattice
///   x = ((a/ppc + shift0) mod 1, b/ppc),  a,b in [0, ppc),
/// via its Fourier series. Row-major a-slowest; 1D ignores b.
/// Used by moving-frame solvers whose grids advance by a common offset.
class LatticeSampler {
public:
  LatticeSampler(const PeriodicScalarField& f, int ppc);
  /// Fills table (size ppc^dim) with field values at the shifted lattice.
  void sample(double shift0, std::vector<double>& table) const;
  int ppc() const { return ppc_; }

private:
  int dim_;
  int modes_;  // torus grid points per axis
  int ppc_;
  // 1D: full spectrum (modes_ entries); 2D: spectrum pre-contracted against
  // the static axis-1 lattice, modes_ x ppc entries.
  std::vector<std::complex<double>> coeff_;
};

/// Writes "x1[,x2],value" rows. Throws IoError on failure.
void write_field_csv(const PeriodicScalarField& f, const std::string& path,
                     const std::string& digest = "");

}  // namespace kpp
