#pragma once

#include <complex>
#include <functional>

namespace parlab::quadrature {

// Neumaier compensated accumulator; gives a summation result independent of
// how callers chunk their loops, which keeps reductions reproducible.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v);
    double value() const { return sum + comp; }
};

// Adaptive Gauss-Kronrod 7-15 on [a, b].
double adaptive(const std::function<double(double)>& f, double a, double b,
                double rel_tol = 1e-12, double abs_tol = 1e-300, int max_depth = 40);

// Adaptive quadrature of a complex integrand (real and imaginary parts share
// one subdivision tree driven by the modulus).
std::complex<double> adaptive_complex(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, double rel_tol = 1e-12,
                                      int max_depth = 40);

// Trapezoid rule of g(u) over u in [lo, hi] with m uniform nodes; used for
// log-substituted integrals (the integrands there decay double-exponentially
// at both ends, where the trapezoid rule converges spectrally).
double trapezoid(const std::function<double(double)>& g, double lo, double hi, int m);
std::complex<double> trapezoid_complex(const std::function<std::complex<double>(double)>& g,
                                       double lo, double hi, int m);

// Trapezoid with node-doubling until |I_{2m} - I_m| <= rel_tol*|I_{2m}| (or
// the node cap is hit). Returns the refined value.
double trapezoid_refine(const std::function<double(double)>& g, double lo, double hi,
                        int m0, double rel_tol, int max_nodes = 1 << 20);
std::complex<double> trapezoid_refine_complex(
    const std::function<std::complex<double>(double)>& g, double lo, double hi, int m0,
    double rel_tol, int max_nodes = 1 << 20);

}  // namespace parlab::quadrature
