#pragma once

// Internal FFT layer shared by the torus calculus and the operator kernels.
// Real-to-complex transforms; spectra use the FFTW half-complex layout
// (last axis of extent N/2+1).

#include <complex>
#include <vector>

#include "kpp/grid.hpp"

namespace kpp::detail {

using cplx = std::complex<double>;

struct Spectrum {
  int dim = 1;
  int n = 0;  // grid points per axis
  std::vector<cplx> c;

  std::size_t bins() const {
    return dim == 1 ? static_cast<std::size_t>(n / 2 + 1)
                    : static_cast<std::size_t>(n) * (n / 2 + 1);
  }
};

Spectrum forward(const PeriodicScalarField& f);
PeriodicScalarField backward(const Spectrum& s, const TorusGrid& grid);

/// Signed frequency of row/bin index i for an N-point axis.
inline int signed_freq(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Multiplies by i*2*pi*k_axis (spectral derivative); the Nyquist plane of
/// that axis is zeroed, as required for a real odd-order derivative.
void apply_derivative(Spectrum& s, int axis);

/// Multiplies by -4*pi^2*|k|^2.
void apply_laplacian(Spectrum& s);

/// Multiplies by the symbol of (Lap - 2*lambda*e.grad):
///   -4*pi^2*|k|^2 - 4*pi*i*lambda*(e.k),
/// with the advective part zeroed on Nyquist planes.
void apply_drift_diffusion(Spectrum& s, const Vec& e, double lambda);

/// Divides by (shift - symbol0(k)) where
///   symbol0(k) = -4*pi^2|k|^2 - 4*pi*i*lambda*(e.k) + lambda^2 + mu_mean,
/// the constant-coefficient part of the linearized operator. Used as a
/// preconditioner for the shifted resolvent.
void apply_resolvent_preconditioner(Spectrum& s, const Vec& e, double lambda,
                                    double mu_mean, double shift);

/// Same for the adjoint drift operator L* = Lap - div(kappa .):
/// constant part symbol0(k) = -4*pi^2|k|^2 - 2*pi*i*(kappa_mean.k).
void apply_adjoint_preconditioner(Spectrum& s, const Vec& kappa_mean,
                                  double shift);

}  // namespace kpp::detail
