#pragma once

// Batched arithmetic primitives behind every hot loop in the library:
// vectorized exp for kernel tables, dot/weighted reductions for convolution
// rows and quadrature sums. A scalar reference implementation always exists;
// an AVX2+FMA variant is selected at runtime when the CPU supports it.
// Both variants use a fixed, worker-independent summation order, and the
// test suite asserts their pointwise/reduction equivalence.

#include <cstddef>
#include <string>

namespace parlab::simd {

struct KernelOps {
    const char* name;
    // out[i] = exp(in[i])
    void (*vexp)(const double* in, double* out, std::size_t n);
    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i a[i]*b[i]*c[i]
    double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
    // y[i] += s*x[i]
    void (*axpy)(double s, const double* x, double* y, std::size_t n);
    // sum_i a[i]
    double (*sum)(const double* a, std::size_t n);
    // max_i |a[i]|
    double (*abs_max)(const double* a, std::size_t n);
};

// Scalar reference kernels (always available; the equivalence baseline).
extern const KernelOps scalar_ops;

#if defined(PARLAB_BUILD_AVX2)
extern const KernelOps avx2_ops;
#endif

// Active kernel set. Chosen once at startup: AVX2 if the CPU has AVX2+FMA,
// else scalar. PARLAB_SIMD=scalar|avx2|auto overrides (a debugging aid; all
// numerical contracts hold for either lane).
const KernelOps& active();

// Name of the active lane ("scalar" or "avx2").
std::string active_name();

inline void vexp(const double* in, double* out, std::size_t n) { active().vexp(in, out, n); }
inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    return active().dot3(a, b, c, n);
}
inline void axpy(double s, const double* x, double* y, std::size_t n) { active().axpy(s, x, y, n); }
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }
inline double abs_max(const double* a, std::size_t n) { return active().abs_max(a, n); }

}  // namespace parlab::simd
