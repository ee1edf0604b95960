#pragma once

#include <complex>
#include <span>
#include <vector>

#include "parlab/grid.hpp"

namespace parlab::spectral {

// Space-time Fourier coefficients on the periodized grid. The transform
// acts on the periodic representative of the closed box (the duplicated
// endpoint per axis is dropped), so the periods are exactly t_max - t_min
// and 2L and the lattice frequencies are rho_k = 2 pi k/(t_max - t_min),
// xi_m = pi m / L.
struct SpectralField {
    GridSpec spec;
    int Mt = 0;  // N_t - 1
    int Mx = 0;  // N_x - 1
    std::vector<std::complex<double>> c;  // time-major over the reduced lattice

    std::size_t reduced_spatial_size() const;
    std::size_t index(int k, std::span<const int> m) const;
    double rho(int k) const;
    double xi(int m) const;
};

SpectralField transform(const GridFunction& f);

struct InverseResult {
    GridFunction values;
    double max_imag = 0.0;  // diagnostic: largest dropped imaginary part
};

InverseResult inverse_transform(const SpectralField& F);

enum class SymbolKind { heat_inverse, riesz_ij, riesz_t, frac_power, poisson };

enum class ZeroModePolicy { subtract_mean, reject, zero_fill };

struct Symbol {
    SymbolKind kind = SymbolKind::heat_inverse;
    int i = 0, j = 0;          // riesz_ij axes (0-based)
    double s = 0.5;            // frac_power / poisson order
    double y = 1.0;            // poisson extension height
    ZeroModePolicy zero_mode = ZeroModePolicy::subtract_mean;
};

// Closed-form symbol value at one frequency. riesz_ij and riesz_t carry the
// algebraic normalization xi_i xi_j/(i rho + |xi|^2), i rho/(i rho+|xi|^2)
// so that sum_i riesz_ii + riesz_t == 1; the physical derivative operator
// d_ij (d_t - Delta)^{-1} is minus the ij symbol (see derivative_oracle).
std::complex<double> symbol_value(const Symbol& sigma, double rho, std::span<const double> xi);

struct ApplyResult {
    SpectralField field;
    double subtracted_mean = 0.0;  // heat_inverse under subtract_mean
};

ApplyResult apply_symbol(const SpectralField& F, const Symbol& sigma);

// Convenience: the spectral oracle for the parabolic derivative operators.
// which = "ij" gives d_ij (d_t - Delta)^{-1} f (minus the ij symbol),
// which = "t" gives d_t (d_t - Delta)^{-1} f.
GridFunction derivative_oracle(const GridFunction& f, bool time_kind, int i = 0, int j = 0);

// Oracle for the solution u = (d_t - Delta)^{-1} f under the zero-mode
// policy; also returns the subtracted mean.
struct SolveOracle {
    GridFunction u;
    double subtracted_mean;
};
SolveOracle heat_inverse_oracle(const GridFunction& f, ZeroModePolicy policy);

// Oracle for the fractional Poisson operator P^s_y via the subordination
// symbol, and for c_s (d_t - Delta)^s via frac_power.
GridFunction poisson_oracle(const GridFunction& f, double s, double y);
GridFunction frac_power_oracle(const GridFunction& f, double s, double c_s = 1.0);

}  // namespace parlab::spectral
