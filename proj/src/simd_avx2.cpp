// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma in this TU only;
// callers reach these through the runtime dispatch table.

#include "parlab/simd.hpp"

#include <immintrin.h>

#include <cmath>

namespace parlab::simd {

namespace {

// exp via Cody-Waite reduction x = k*ln2 + r, |r| <= ln2/2, then a
// degree-13 Taylor polynomial in r and exponent scaling by 2^k.
// Inputs below -708 flush to 0, above +709 to +inf.
inline __m256d exp4(__m256d x) {
    const __m256d inv_ln2 = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d lo_cut = _mm256_set1_pd(-708.0);
    const __m256d hi_cut = _mm256_set1_pd(709.0);

    __m256d lo_mask = _mm256_cmp_pd(x, lo_cut, _CMP_LT_OQ);
    __m256d hi_mask = _mm256_cmp_pd(x, hi_cut, _CMP_GT_OQ);
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo_cut), hi_cut);

    __m256d kd = _mm256_round_pd(_mm256_mul_pd(xc, inv_ln2),
                                 _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(kd, ln2_hi, xc);
    r = _mm256_fnmadd_pd(kd, ln2_lo, r);

    // Taylor coefficients 1/13!, ..., 1/2!, 1, 1 (Horner).
    __m256d p = _mm256_set1_pd(1.6059043836821613e-10);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.0876756987868098e-09));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.5052108385441720e-08));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985893e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985888e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587302e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333333e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0000000000000000e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // scale by 2^k through the exponent field
    __m128i ki = _mm256_cvtpd_epi32(kd);
    __m256i k64 = _mm256_cvtepi32_epi64(ki);
    __m256i expo = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    p = _mm256_mul_pd(p, _mm256_castsi256_pd(expo));

    p = _mm256_andnot_pd(lo_mask, p);
    p = _mm256_blendv_pd(p, _mm256_set1_pd(HUGE_VAL), hi_mask);
    return p;
}

void vexp_avx2(const double* in, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(in + i)));
    }
    for (; i < n; ++i) out[i] = std::exp(in[i]);
}

inline double hsum_ordered(__m256d v) {
    // matches the scalar reference's ((s0+s1)+(s2+s3)) reduction order
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    double s0 = _mm_cvtsd_f64(lo);
    double s1 = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
    double s2 = _mm_cvtsd_f64(hi);
    double s3 = _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
    return (s0 + s1) + (s2 + s3);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum_ordered(acc) + tail;
}

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i] * c[i];
    return hsum_ordered(acc) + tail;
}

void axpy_avx2(double s, const double* x, double* y, std::size_t n) {
    __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(sv, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += s * x[i];
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i];
    return hsum_ordered(acc) + tail;
}

double abs_max_avx2(const double* a, std::size_t n) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_max_pd(m, _mm256_andnot_pd(signmask, _mm256_loadu_pd(a + i)));
    }
    double mm = 0.0;
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    for (double v : lanes) mm = std::max(mm, v);
    for (; i < n; ++i) mm = std::max(mm, std::abs(a[i]));
    return mm;
}

}  // namespace

const KernelOps avx2_ops = {
    "avx2", vexp_avx2, dot_avx2, dot3_avx2, axpy_avx2, sum_avx2, abs_max_avx2,
};

}  // namespace parlab::simd
