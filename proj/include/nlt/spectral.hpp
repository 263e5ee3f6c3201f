#pragma once

#include <complex>
#include <vector>

#include "nlt/field.hpp"
#include "nlt/grid.hpp"

namespace nlt {

/// Half spectrum of a real field: slots m = 0..n/2 of the unnormalized DFT.
using Spectrum = std::vector<std::complex<double>>;

Spectrum to_spectrum(const RealField& f);
RealField from_spectrum(const Grid& grid, Spectrum spectrum);

/// Raw transforms on sample vectors. Throw std::invalid_argument on size mismatch.
Spectrum forward_transform(const Grid& grid, const std::vector<double>& values);
std::vector<double> inverse_transform(const Grid& grid, Spectrum spectrum);

// In-place Fourier multipliers on a half spectrum.
void apply_hilbert(const Grid& grid, Spectrum& s);
void apply_frac_laplacian(const Grid& grid, Spectrum& s, double alpha);
void apply_deriv(const Grid& grid, Spectrum& s);
void apply_dealias(const Grid& grid, Spectrum& s);

/// Largest mode index kept by the 2/3 rule.
std::size_t dealias_cutoff(const Grid& grid);

/// H f with symbol -i sign(k). Zero mode and Nyquist mode map to zero.
RealField hilbert(const RealField& f);

/// Lambda^alpha f = (-Laplacian)^(alpha/2) f with symbol |k|^alpha, alpha in [0, 2].
/// alpha = 0 is the identity.
RealField frac_laplacian(const RealField& f, double alpha);

/// Spectral derivative with symbol i k; the Nyquist mode is zeroed.
RealField deriv(const RealField& f);

/// Zero every mode with |m| > n/3.
RealField dealias(const RealField& f);

/// Pointwise product followed by the 2/3 rule.
RealField dealiased_product(const RealField& a, const RealField& b);

/// Max-norm of 2H(f Hf) - [(Hf)^2 - f^2 - mean((Hf)^2 - f^2)] with dealiased products.
double hilbert_identity_residual(const RealField& f);

/// Sum of |k_m|^(2s) |f_m|^2 scaled so that s = 0 gives the rectangle-rule integral of f^2.
double sobolev_seminorm_squared(const Grid& grid, const Spectrum& s, double order);

}  // namespace nlt
