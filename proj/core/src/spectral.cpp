#include "spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace kpp::detail {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Per-thread FFTW workspace: plans are bound to the buffers they were
// created with, so each thread owns its own set.
struct Workspace {
  int dim = 0;
  int n = 0;
  double* real = nullptr;
  fftw_complex* cplx_buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  Workspace(int dim_, int n_) : dim(dim_), n(n_) {
    const std::size_t nreal = dim == 1 ? n : static_cast<std::size_t>(n) * n;
    const std::size_t nbins =
        dim == 1 ? n / 2 + 1 : static_cast<std::size_t>(n) * (n / 2 + 1);
    real = fftw_alloc_real(nreal);
    cplx_buf = fftw_alloc_complex(nbins);
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (dim == 1) {
      fwd = fftw_plan_dft_r2c_1d(n, real, cplx_buf, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_1d(n, cplx_buf, real, FFTW_ESTIMATE);
    } else {
      fwd = fftw_plan_dft_r2c_2d(n, n, real, cplx_buf, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_2d(n, n, cplx_buf, real, FFTW_ESTIMATE);
    }
  }

  ~Workspace() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx_buf);
  }

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

Workspace& workspace(int dim, int n) {
  thread_local std::unordered_map<int, std::unique_ptr<Workspace>> cache;
  const int key = dim * 1000000 + n;
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<Workspace>(dim, n)).first;
  }
  return *it->second;
}

constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace

Spectrum forward(const PeriodicScalarField& f) {
  const int dim = f.grid.dim;
  const int n = f.grid.points;
  Workspace& ws = workspace(dim, n);
  std::memcpy(ws.real, f.values.data(), f.values.size() * sizeof(double));
  fftw_execute(ws.fwd);
  Spectrum s;
  s.dim = dim;
  s.n = n;
  s.c.resize(s.bins());
  std::memcpy(reinterpret_cast<double*>(s.c.data()), ws.cplx_buf,
              s.bins() * sizeof(cplx));
  return s;
}

PeriodicScalarField backward(const Spectrum& s, const TorusGrid& grid) {
  Workspace& ws = workspace(s.dim, s.n);
  std::memcpy(ws.cplx_buf, reinterpret_cast<const double*>(s.c.data()),
              s.bins() * sizeof(cplx));
  fftw_execute(ws.bwd);
  PeriodicScalarField out(grid);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = ws.real[i] * scale;
  }
  return out;
}

void apply_derivative(Spectrum& s, int axis) {
  const int n = s.n;
  const int half = n / 2;
  if (s.dim == 1) {
    for (int k = 0; k <= half; ++k) {
      const double f = (k == half) ? 0.0 : two_pi * k;
      s.c[k] *= cplx(0.0, f);
    }
  } else {
    const int ncols = half + 1;
    for (int r = 0; r < n; ++r) {
      const int kr = signed_freq(r, n);
      for (int c = 0; c < ncols; ++c) {
        const int k = axis == 0 ? kr : c;
        const bool nyq = axis == 0 ? (r == half) : (c == half);
        const double f = nyq ? 0.0 : two_pi * k;
        s.c[static_cast<std::size_t>(r) * ncols + c] *= cplx(0.0, f);
      }
    }
  }
}

void apply_laplacian(Spectrum& s) {
  const int n = s.n;
  const int half = n / 2;
  if (s.dim == 1) {
    for (int k = 0; k <= half; ++k) {
      s.c[k] *= -two_pi * two_pi * k * k;
    }
  } else {
    const int ncols = half + 1;
    for (int r = 0; r < n; ++r) {
      const double kr = signed_freq(r, n);
      for (int c = 0; c < ncols; ++c) {
        s.c[static_cast<std::size_t>(r) * ncols + c] *=
            -two_pi * two_pi * (kr * kr + static_cast<double>(c) * c);
      }
    }
  }
}

void apply_drift_diffusion(Spectrum& s, const Vec& e, double lambda) {
  const int n = s.n;
  const int half = n / 2;
  if (s.dim == 1) {
    for (int k = 0; k <= half; ++k) {
      const double adv = (k == half) ? 0.0 : 2.0 * two_pi * lambda * e[0] * k;
      s.c[k] *= cplx(-two_pi * two_pi * k * k, -adv);
    }
  } else {
    const int ncols = half + 1;
    for (int r = 0; r < n; ++r) {
      const double kr = signed_freq(r, n);
      const double kr_adv = (r == half) ? 0.0 : kr;
      for (int c = 0; c < ncols; ++c) {
        const double kc_adv = (c == half) ? 0.0 : c;
        const double ek = e[0] * kr_adv + e[1] * kc_adv;
        s.c[static_cast<std::size_t>(r) * ncols + c] *=
            cplx(-two_pi * two_pi * (kr * kr + static_cast<double>(c) * c),
                 -2.0 * two_pi * lambda * ek);
      }
    }
  }
}

namespace {

template <typename SymbolFn>
void divide_by(Spectrum& s, SymbolFn&& denom) {
  const int n = s.n;
  const int half = n / 2;
  if (s.dim == 1) {
    for (int k = 0; k <= half; ++k) {
      s.c[k] /= denom(static_cast<double>(k), 0.0, k == half, false);
    }
  } else {
    const int ncols = half + 1;
    for (int r = 0; r < n; ++r) {
      const double kr = signed_freq(r, n);
      for (int c = 0; c < ncols; ++c) {
        s.c[static_cast<std::size_t>(r) * ncols + c] /=
            denom(kr, static_cast<double>(c), r == half, c == half);
      }
    }
  }
}

}  // namespace

void apply_resolvent_preconditioner(Spectrum& s, const Vec& e, double lambda,
                                    double mu_mean, double shift) {
  divide_by(s, [&](double k0, double k1, bool nyq0, bool nyq1) {
    const double lap = -two_pi * two_pi * (k0 * k0 + k1 * k1);
    const double ek = e[0] * (nyq0 ? 0.0 : k0) + e[1] * (nyq1 ? 0.0 : k1);
    const cplx symbol(lap + lambda * lambda + mu_mean,
                      -2.0 * two_pi * lambda * ek);
    return shift - symbol;
  });
}

void apply_adjoint_preconditioner(Spectrum& s, const Vec& kappa_mean,
                                  double shift) {
  divide_by(s, [&](double k0, double k1, bool nyq0, bool nyq1) {
    const double lap = -two_pi * two_pi * (k0 * k0 + k1 * k1);
    const double kk =
        kappa_mean[0] * (nyq0 ? 0.0 : k0) + kappa_mean[1] * (nyq1 ? 0.0 : k1);
    const cplx symbol(lap, -two_pi * kk);
    return shift - symbol;
  });
}

}  // namespace kpp::detail
