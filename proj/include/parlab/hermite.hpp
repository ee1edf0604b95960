#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "parlab/grid.hpp"

namespace parlab::hermite {

// Normalized Hermite function h_k(r), evaluated by the stable three-term
// recurrence seeded with h_0 = pi^{-1/4} e^{-r^2/2}.
double eval_hermite(int k, double r);

// h_0..h_J(r) in one recurrence sweep.
std::vector<double> eval_hermite_all(int J, double r);

struct MultiIndex {
    std::vector<int> a;
    int degree() const {
        int s = 0;
        for (int v : a) s += v;
        return s;
    }
};

double eval_multi(const MultiIndex& alpha, std::span<const double> x);

// Enumeration of all multi-indices with |alpha| <= J in a fixed order.
struct Basis {
    int n = 1;
    int J = 0;
    std::vector<MultiIndex> indices;

    static Basis make(int n, int J);
    std::size_t size() const { return indices.size(); }
    // position of alpha in indices, or npos
    std::size_t find(std::span<const int> alpha) const;
    int eigenvalue(std::size_t idx) const { return 2 * indices[idx].degree() + n; }
};

// Default truncation degrees (coefficient counts stay in the thousands).
int default_degree(int n);

// Spatial expansion f = sum c_alpha h_alpha.
struct Expansion {
    Basis basis;
    std::vector<double> c;
    bool box_warning = false;  // projection box smaller than recommended
};

// Spatial expansion with a time-frequency axis: c_alpha(rho_k) on the
// discrete frequencies rho_k = 2 pi k / period.
struct TimeExpansion {
    Basis basis;
    int n_freq = 0;
    double period = 0.0;
    // freq-major: coeff[k * basis.size() + a]
    std::vector<std::complex<double>> c;

    double rho(int k) const {
        int ks = (k <= n_freq / 2) ? k : k - n_freq;
        return 2.0 * M_PI * ks / period;
    }
};

// Recommended half-width of the projection box for degree J in dimension n.
double recommended_halfwidth(int n, int J);

// Projection of a closed-form spatial function onto degrees <= J by
// trapezoid quadrature over |x_i| <= halfwidth (>= 10 points per unit
// length). halfwidth <= 0 picks the recommended value; a smaller box sets
// box_warning on the result.
Expansion project(const std::function<double(std::span<const double>)>& f, int n, int J,
                  double halfwidth = -1.0, int points_per_unit = 10);

double synthesize(const Expansion& e, std::span<const double> x);

// e^{-tau H} on coefficients: c_alpha *= exp(-tau (2|alpha|+n)).
Expansion semigroup_spectral(const Expansion& e, double tau);

enum class TimeMultiplier { inverse, riesz_t, riesz_H };

// Per-(frequency, alpha) multipliers (i rho + 2|alpha| + n)^{-1},
// i rho (i rho + 2|alpha| + n)^{-1}, (2|alpha|+n)(i rho + 2|alpha|+n)^{-1}.
TimeExpansion time_multiplier(const TimeExpansion& e, TimeMultiplier kind);

std::complex<double> time_symbol(TimeMultiplier kind, double rho, int eigenvalue);

// Coefficient-space ladder operators (exact): d/dx_i and multiplication by
// x_i; the output basis degree grows by one.
Expansion differentiate(const Expansion& e, int axis);
Expansion multiply_coordinate(const Expansion& e, int axis);
TimeExpansion differentiate(const TimeExpansion& e, int axis);
TimeExpansion multiply_coordinate(const TimeExpansion& e, int axis);

// Analysis/synthesis between grid functions and time expansions: spatial
// projection per time slice (grid trapezoid quadrature) followed by a DFT
// over the periodic time representative.
TimeExpansion analyze(const GridFunction& f, int J);
GridFunction synthesize_grid(const TimeExpansion& e, const GridSpec& spec);

}  // namespace parlab::hermite
