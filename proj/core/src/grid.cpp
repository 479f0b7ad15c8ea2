#include "kpp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "spectral.hpp"

namespace kpp {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

double norm(const Vec& v) { return std::hypot(v[0], v[1]); }

Vec normalized(const Vec& v) {
  const double r = norm(v);
  if (r == 0.0) throw ZeroVector("cannot normalize the zero vector");
  return {v[0] / r, v[1] / r};
}

double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }

Vec unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

TorusGrid::TorusGrid(int dim_, int points_) : dim(dim_), points(points_) {
  if (dim != 1 && dim != 2) {
    throw DomainError("torus grid dimension must be 1 or 2");
  }
  if (points < 8 || !is_power_of_two(points)) {
    throw DomainError("torus grid points per axis must be a power of two >= 8");
  }
}

double PeriodicScalarField::min() const {
  return *std::min_element(values.begin(), values.end());
}

double PeriodicScalarField::max() const {
  return *std::max_element(values.begin(), values.end());
}

double PeriodicScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

MuSpec MuSpec::constant(int dim, double value) {
  MuSpec s;
  s.kind = Kind::Constant;
  s.dim = dim;
  s.constant_value = value;
  return s;
}

MuSpec MuSpec::trig(int dim, double offset, std::vector<TrigTerm> terms) {
  MuSpec s;
  s.kind = Kind::TrigSeries;
  s.dim = dim;
  s.offset = offset;
  s.terms = std::move(terms);
  return s;
}

double MuSpec::operator()(const Vec& x) const {
  if (kind == Kind::Constant) return constant_value;
  double v = offset;
  for (const TrigTerm& t : terms) {
    const double phase =
        two_pi * (t.k[0] * x[0] + (dim == 2 ? t.k[1] * x[1] : 0.0));
    v += t.cos_amp * std::cos(phase) + t.sin_amp * std::sin(phase);
  }
  return v;
}

PeriodicScalarField build_field(const MuSpec& spec, const TorusGrid& grid) {
  if (spec.dim != grid.dim) {
    throw DomainError("medium dimension does not match grid dimension");
  }
  PeriodicScalarField f(grid);
  const int n = grid.points;
  if (grid.dim == 1) {
    for (int i = 0; i < n; ++i) f.at(i) = spec({grid.coord(i), 0.0});
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        f.at(i, j) = spec({grid.coord(i), grid.coord(j)});
      }
    }
  }
  if (f.min() <= 0.0) {
    throw NonPositiveMedium("medium is not uniformly positive on the grid");
  }
  return f;
}

PeriodicVectorField gradient(const PeriodicScalarField& f) {
  PeriodicVectorField g(f.grid);
  const detail::Spectrum base = detail::forward(f);
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    detail::Spectrum s = base;
    detail::apply_derivative(s, axis);
    g.comp[axis] = detail::backward(s, f.grid);
  }
  return g;
}

PeriodicScalarField divergence(const PeriodicVectorField& v) {
  PeriodicScalarField out(v.grid);
  for (int axis = 0; axis < v.grid.dim; ++axis) {
    detail::Spectrum s = detail::forward(v.comp[axis]);
    detail::apply_derivative(s, axis);
    const PeriodicScalarField d = detail::backward(s, v.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] += d.values[i];
    }
  }
  return out;
}

PeriodicScalarField laplacian(const PeriodicScalarField& f) {
  detail::Spectrum s = detail::forward(f);
  detail::apply_laplacian(s);
  return detail::backward(s, f.grid);
}

double integrate(const PeriodicScalarField& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum / static_cast<double>(f.grid.size());
}

double inner(const PeriodicScalarField& f, const PeriodicScalarField& g) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    sum += f.values[i] * g.values[i];
  }
  return sum / static_cast<double>(f.grid.size());
}

PeriodicScalarField multiply(const PeriodicScalarField& f,
                             const PeriodicScalarField& g) {
  PeriodicScalarField out(f.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = f.values[i] * g.values[i];
  }
  return out;
}

PeriodicScalarField linear_combination(double a, const PeriodicScalarField& f,
                                       double b, const PeriodicScalarField& g) {
  PeriodicScalarField out(f.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = a * f.values[i] + b * g.values[i];
  }
  return out;
}

namespace {

// Full (both-signs) spectrum from the half-complex one, scaled to Fourier
// series coefficients.
std::vector<std::complex<double>> full_spectrum(const PeriodicScalarField& f) {
  using cplx = std::complex<double>;
  const detail::Spectrum s = detail::forward(f);
  const int n = s.n;
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  std::vector<cplx> full;
  if (s.dim == 1) {
    full.assign(n, cplx(0.0));
    for (int k = 0; k <= n / 2; ++k) full[k] = s.c[k] * scale;
    for (int k = n / 2 + 1; k < n; ++k) full[k] = std::conj(full[n - k]);
  } else {
    const int ncols = n / 2 + 1;
    full.assign(static_cast<std::size_t>(n) * n, cplx(0.0));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < ncols; ++c) {
        full[static_cast<std::size_t>(r) * n + c] =
            s.c[static_cast<std::size_t>(r) * ncols + c] * scale;
      }
    }
    for (int r = 0; r < n; ++r) {
      for (int c = ncols; c < n; ++c) {
        const int rr = (n - r) % n;
        full[static_cast<std::size_t>(r) * n + c] =
            std::conj(full[static_cast<std::size_t>(rr) * n + (n - c)]);
      }
    }
  }
  return full;
}

}  // namespace

double sample_at(const PeriodicScalarField& f, const Vec& x) {
  using cplx = std::complex<double>;
  const auto full = full_spectrum(f);
  const int n = f.grid.points;
  cplx acc(0.0);
  if (f.grid.dim == 1) {
    for (int k = 0; k < n; ++k) {
      const double fr = detail::signed_freq(k, n);
      acc += full[k] * std::polar(1.0, two_pi * fr * x[0]);
    }
  } else {
    for (int r = 0; r < n; ++r) {
      const double fr = detail::signed_freq(r, n);
      const cplx pr = std::polar(1.0, two_pi * fr * x[0]);
      for (int c = 0; c < n; ++c) {
        const double fc = detail::signed_freq(c, n);
        acc += full[static_cast<std::size_t>(r) * n + c] * pr *
               std::polar(1.0, two_pi * fc * x[1]);
      }
    }
  }
  return acc.real();
}

LatticeSampler::LatticeSampler(const PeriodicScalarField& f, int ppc)
    : dim_(f.grid.dim), modes_(f.grid.points), ppc_(ppc) {
  if (ppc < 1) throw DomainError("lattice sampler needs ppc >= 1");
  const auto full = full_spectrum(f);
  const int n = modes_;
  if (dim_ == 1) {
    coeff_ = full;
  } else {
    // Contract axis 1 against its static lattice b/ppc.
    coeff_.assign(static_cast<std::size_t>(n) * ppc_, {0.0, 0.0});
    for (int r = 0; r < n; ++r) {
      for (int b = 0; b < ppc_; ++b) {
        std::complex<double> acc(0.0);
        for (int c = 0; c < n; ++c) {
          const double fc = detail::signed_freq(c, n);
          acc += full[static_cast<std::size_t>(r) * n + c] *
                 std::polar(1.0, two_pi * fc * b / ppc_);
        }
        coeff_[static_cast<std::size_t>(r) * ppc_ + b] = acc;
      }
    }
  }
}

void LatticeSampler::sample(double shift0, std::vector<double>& table) const {
  using cplx = std::complex<double>;
  const int n = modes_;
  table.assign(dim_ == 1 ? ppc_ : static_cast<std::size_t>(ppc_) * ppc_, 0.0);
  std::vector<cplx> phase(n);
  for (int a = 0; a < ppc_; ++a) {
    const double x0 = static_cast<double>(a) / ppc_ + shift0;
    for (int r = 0; r < n; ++r) {
      const double fr = detail::signed_freq(r, n);
      phase[r] = std::polar(1.0, two_pi * fr * x0);
    }
    if (dim_ == 1) {
      cplx acc(0.0);
      for (int r = 0; r < n; ++r) acc += coeff_[r] * phase[r];
      table[a] = acc.real();
    } else {
      for (int b = 0; b < ppc_; ++b) {
        cplx acc(0.0);
        for (int r = 0; r < n; ++r) {
          acc += coeff_[static_cast<std::size_t>(r) * ppc_ + b] * phase[r];
        }
        table[static_cast<std::size_t>(a) * ppc_ + b] = acc.real();
      }
    }
  }
}

void write_field_csv(const PeriodicScalarField& f, const std::string& path,
                     const std::string& digest) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw IoError("cannot open " + path + " for writing");
  if (!digest.empty()) {
    std::fprintf(fp, "# schema_version=1 config_digest=%s\n", digest.c_str());
  }
  const int n = f.grid.points;
  if (f.grid.dim == 1) {
    std::fprintf(fp, "x,value\n");
    for (int i = 0; i < n; ++i) {
      std::fprintf(fp, "%.17g,%.17g\n", f.grid.coord(i), f.at(i));
    }
  } else {
    std::fprintf(fp, "x1,x2,value\n");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", f.grid.coord(i),
                     f.grid.coord(j), f.at(i, j));
      }
    }
  }
  std::fclose(fp);
}

}  // namespace kpp
