#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace parlab::kernels {

// ---- Gauss-Weierstrass kernel of the heat semigroup -----------------------

// W(tau, y) = (4 pi tau)^{-n/2} exp(-|y|^2/(4 tau)), assembled in log space
// and exponentiated once. tau <= 0 is rejected.
double gauss_weierstrass(int n, double tau, std::span<const double> y);

enum class GwDerivative { d_i, d_ij, d_tau };

// Closed-form polynomial-times-Gaussian derivative kernels of W.
double gw_derivative(GwDerivative kind, int n, double tau, std::span<const double> y, int i = 0,
                     int j = 0);

// Third derivatives d_i d_j d_k W and time derivative of d_ij W; these back
// the gradient/smoothness bound probes.
double gw_third_derivative(int n, double tau, std::span<const double> y, int i, int j, int k);
double gw_dtau_dij(int n, double tau, std::span<const double> y, int i, int j);

// Radius beyond which Gaussian tails are dropped: 2*sqrt(tau*|log eps_mach|).
double gaussian_tail_radius(double tau);

// ---- Mehler kernel of the harmonic-oscillator semigroup -------------------

// tau below this threshold is clamped before evaluating hyperbolic
// primitives (coth tau saturates the exponent scale at ~1e18 there).
inline constexpr double mehler_tau_clamp = 1e-9;

struct MehlerFactorization {
    double S;     // (2 pi sinh 2 tau)^{-n/2}
    double Hfac;  // exp(-|x-y|^2 coth(tau)/4)
    double Gfac;  // exp(-|x+y|^2 tanh(tau)/4)
    double tau;
    std::vector<double> x, y;
};

// Kernel of e^{-tau H}, H = -Delta + |x|^2, evaluated through the stable
// S*H*G factorization in log space.
double mehler(int n, double tau, std::span<const double> x, std::span<const double> y);

// The same value assembled from the one-term hyperbolic form
// (2 pi sinh 2tau)^{-n/2} exp(-|x-y|^2 coth(2tau)/2 - x.y tanh(tau));
// kept as a cross-check of the factorized route.
double mehler_direct_form(int n, double tau, std::span<const double> x,
                          std::span<const double> y);

MehlerFactorization mehler_factors(int n, double tau, std::span<const double> x,
                                   std::span<const double> y);

enum class HermiteRieszKind { ij, t };

// Integrand of the oscillator parabolic Riesz transforms: the second-order
// S/H/G derivative combination for kind=ij and d_tau(SHG) for kind=t, both
// reduced to closed form (SHG times a polynomial-hyperbolic factor).
double hermite_riesz_integrand(HermiteRieszKind kind, int n, double tau,
                               std::span<const double> x, std::span<const double> y, int i = 0,
                               int j = 0);

// y-gradient component and tau-derivative of the Riesz integrands.
double hermite_riesz_grad(HermiteRieszKind kind, int n, double tau, std::span<const double> x,
                          std::span<const double> y, int i, int j, int k);
double hermite_riesz_dtau(HermiteRieszKind kind, int n, double tau, std::span<const double> x,
                          std::span<const double> y, int i, int j);

// ---- Fractional Poisson kernel --------------------------------------------

// P^s_y(t, x) of the heat extension: the subordination density in t times
// W(t, x), zero for t <= 0.
double poisson_kernel(int n, double s, double height_y, double t, std::span<const double> x);

// ---- Sampled bound probes --------------------------------------------------

enum class BoundKernel {
    heat_ij,        // d_ij W
    heat_t,         // d_tau W
    heat_ij_grad,   // |grad_y d_ij W|
    heat_ij_dtau,   // d_tau d_ij W
    heat_t_grad,    // |grad_y d_tau W|
    heat_t_dtau,    // d_tau d_tau W
    hermite_ij,
    hermite_t,
    hermite_ij_grad,
    hermite_ij_dtau,
    hermite_t_grad,
    hermite_t_dtau,
    poisson,        // sup over sampled heights y of |P^s_y|
    poisson_x_mass  // x-integral of P^s_y against the (4.4) majorant
};

struct CloudSpec {
    int n = 1;
    std::size_t points = 10000;
    std::uint64_t seed = 1234;
    double tau_min = 1e-4;
    double tau_max = 1e2;
    double box = 2.0;   // spatial sample box half-width
    double s = 0.5;     // fractional order for the poisson kernels
};

struct BoundReport {
    std::string kernel_id;
    double exponent_m = 0.0;
    double sup = 0.0;
    std::size_t cloud_points = 0;
    // worst sample
    double worst_tau = 0.0;
    std::vector<double> worst_x, worst_y;
    double worst_height = 0.0;
};

// Sampled sup of |K| * (tau^{1/2} + |x-y|)^m over a seeded cloud that is
// log-uniform in tau and uniform in the spatial box. For poisson_x_mass the
// probe is the ratio of the exact x-integral of the kernel to the
// y^{2s} e^{-y^2/(4 tau)} / tau^{1+s} majorant.
BoundReport bound_check(BoundKernel id, double exponent_m, const CloudSpec& cloud);

// Quadrature of the comparison kernel Psi(z, s^{1/2}) =
// (|z|+s^{1/2})^{-(n+2)} chi_{|z|>1} chi_{s<1} over R^{n+1}; finite and
// stable under refinement.
double psi_comparison_integral(int n, int refine_level = 0);

}  // namespace parlab::kernels
