#pragma once

// Internal helpers for operators that treat the grid as its periodization
// box: the closed box's duplicated end nodes are dropped, work happens on
// the reduced (N_t-1) x (N_x-1)^n torus, and results are expanded back.

#include <cmath>
#include <vector>

#include "parlab/grid.hpp"

namespace parlab::periodic {

struct Buffer {
    GridSpec spec;
    int Mt = 0;
    int Mx = 0;
    std::size_t rsx = 0;  // Mx^n
    std::vector<double> v;  // time-major over the reduced lattice

    double* slice(int j) { return v.data() + static_cast<std::size_t>(j) * rsx; }
    const double* slice(int j) const { return v.data() + static_cast<std::size_t>(j) * rsx; }
};

// reduce_space = false keeps the full closed spatial node set (used by the
// oscillator operators, whose spatial kernel is a box integral, while the
// time axis stays periodic). reduce_time = false keeps all time slices
// (free-space operators with zero extension in time).
inline Buffer to_periodic(const GridFunction& f, bool reduce_space = true,
                          bool reduce_time = true) {
    const GridSpec& spec = f.spec;
    Buffer b;
    b.spec = spec;
    b.Mt = reduce_time ? spec.N_t - 1 : spec.N_t;
    b.Mx = reduce_space ? spec.N_x - 1 : spec.N_x;
    b.rsx = 1;
    for (int d = 0; d < spec.n; ++d) b.rsx *= static_cast<std::size_t>(b.Mx);
    b.v.assign(static_cast<std::size_t>(b.Mt) * b.rsx, 0.0);
    std::vector<int> m(spec.n);
    for (int j = 0; j < b.Mt; ++j) {
        for (std::size_t mm = 0; mm < b.rsx; ++mm) {
            std::size_t rem = mm;
            for (int d = spec.n - 1; d >= 0; --d) {
                m[d] = static_cast<int>(rem % b.Mx);
                rem /= b.Mx;
            }
            b.slice(j)[mm] = f.at(j, spec.spatial_index(m));
        }
    }
    return b;
}

inline GridFunction to_grid(const Buffer& b) {
    const GridSpec& spec = b.spec;
    GridFunction out = zeros(spec);
    std::vector<int> m(spec.n);
    for (int j = 0; j < spec.N_t; ++j) {
        int jp = (b.Mt == spec.N_t) ? j : j % b.Mt;
        for (std::size_t mm = 0; mm < spec.spatial_size(); ++mm) {
            spec.spatial_coords(mm, m);
            std::size_t ridx = 0;
            for (int d = 0; d < spec.n; ++d) ridx = ridx * b.Mx + (m[d] % b.Mx);
            out.at(j, mm) = b.slice(jp)[ridx];
        }
    }
    return out;
}

inline Buffer like(const Buffer& b) {
    Buffer out = b;
    std::fill(out.v.begin(), out.v.end(), 0.0);
    return out;
}

// Linear interpolation of the time slice at continuous time tt (periodic).
// Writes the interpolated spatial slice into out (size rsx). Convex.
inline void linear_slice(const Buffer& b, double tt, double* out) {
    double T = b.spec.t_max - b.spec.t_min;
    double theta = (tt - b.spec.t_min) / T * b.Mt;
    theta -= std::floor(theta / b.Mt) * b.Mt;
    int i0 = static_cast<int>(std::floor(theta)) % b.Mt;
    double fr = theta - std::floor(theta);
    int i1 = (i0 + 1) % b.Mt;
    const double* s0 = b.slice(i0);
    const double* s1 = b.slice(i1);
    for (std::size_t m = 0; m < b.rsx; ++m) out[m] = (1.0 - fr) * s0[m] + fr * s1[m];
}

// Four-point (cubic Lagrange) interpolation of the time slice at tt.
inline void cubic_slice(const Buffer& b, double tt, double* out) {
    double T = b.spec.t_max - b.spec.t_min;
    double theta = (tt - b.spec.t_min) / T * b.Mt;
    theta -= std::floor(theta / b.Mt) * b.Mt;
    int i1 = static_cast<int>(std::floor(theta));
    double fr = theta - i1;
    i1 %= b.Mt;
    int i0 = (i1 + b.Mt - 1) % b.Mt;
    int i2 = (i1 + 1) % b.Mt;
    int i3 = (i1 + 2) % b.Mt;
    double w0 = -fr * (fr - 1.0) * (fr - 2.0) / 6.0;
    double w1 = (fr * fr - 1.0) * (fr - 2.0) / 2.0;
    double w2 = -fr * (fr + 1.0) * (fr - 2.0) / 2.0;
    double w3 = fr * (fr * fr - 1.0) / 6.0;
    const double* s0 = b.slice(i0);
    const double* s1 = b.slice(i1);
    const double* s2 = b.slice(i2);
    const double* s3 = b.slice(i3);
    for (std::size_t m = 0; m < b.rsx; ++m)
        out[m] = w0 * s0[m] + w1 * s1[m] + w2 * s2[m] + w3 * s3[m];
}

// Four-point interpolation with zero extension outside [t_min, t_max];
// valid for buffers built with reduce_time = false.
inline void cubic_slice_free(const Buffer& b, double tt, double* out) {
    double ht = (b.spec.t_max - b.spec.t_min) / (b.spec.N_t - 1);
    double theta = (tt - b.spec.t_min) / ht;
    int i1 = static_cast<int>(std::floor(theta));
    double fr = theta - i1;
    double w[4] = {-fr * (fr - 1.0) * (fr - 2.0) / 6.0, (fr * fr - 1.0) * (fr - 2.0) / 2.0,
                   -fr * (fr + 1.0) * (fr - 2.0) / 2.0, fr * (fr * fr - 1.0) / 6.0};
    for (std::size_t m = 0; m < b.rsx; ++m) out[m] = 0.0;
    for (int q = 0; q < 4; ++q) {
        int idx = i1 - 1 + q;
        if (idx < 0 || idx >= b.Mt) continue;
        const double* s = b.slice(idx);
        for (std::size_t m = 0; m < b.rsx; ++m) out[m] += w[q] * s[m];
    }
}

// Circular correlation along one spatial axis: out[..., a, ...] +=
// scale * sum_o row[o] * in[..., (a - o) mod Mx, ...]. row has Mx entries.
inline void axis_correlate_add(const double* in, double* out, const std::vector<double>& row,
                               int axis, int n, int Mx, double scale) {
    // stride of the axis and count of independent lines
    std::size_t stride = 1;
    for (int d = axis + 1; d < n; ++d) stride *= static_cast<std::size_t>(Mx);
    std::size_t block = stride * static_cast<std::size_t>(Mx);
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(Mx);
    std::size_t nblocks = total / block;

    std::vector<double> line(Mx), acc(Mx);
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        for (std::size_t off = 0; off < stride; ++off) {
            const double* base_in = in + blk * block + off;
            double* base_out = out + blk * block + off;
            for (int a = 0; a < Mx; ++a) line[a] = base_in[a * stride];
            for (int a = 0; a < Mx; ++a) {
                double s = 0.0;
                for (int o = 0; o < Mx; ++o) {
                    int b = a - o;
                    if (b < 0) b += Mx;
                    s += row[o] * line[b];
                }
                acc[a] = s;
            }
            for (int a = 0; a < Mx; ++a) base_out[a * stride] += scale * acc[a];
        }
    }
}

// Free-space correlation along one spatial axis with a centered row
// (row[half + o], o in [-half, half]) and zero extension outside the box:
// out[..., a, ...] += scale * sum_o row[half+o] * in[..., a-o, ...].
inline void axis_correlate_free_add(const double* in, double* out, const std::vector<double>& row,
                                    int half, int axis, int n, int N, double scale) {
    std::size_t stride = 1;
    for (int d = axis + 1; d < n; ++d) stride *= static_cast<std::size_t>(N);
    std::size_t block = stride * static_cast<std::size_t>(N);
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(N);
    std::size_t nblocks = total / block;

    std::vector<double> line(N), acc(N);
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        for (std::size_t off = 0; off < stride; ++off) {
            const double* base_in = in + blk * block + off;
            double* base_out = out + blk * block + off;
            for (int a = 0; a < N; ++a) line[a] = base_in[a * stride];
            for (int a = 0; a < N; ++a) {
                double s = 0.0;
                int o_lo = std::max(-half, a - (N - 1));
                int o_hi = std::min(half, a);
                for (int o = o_lo; o <= o_hi; ++o) s += row[half + o] * line[a - o];
                acc[a] = s;
            }
            for (int a = 0; a < N; ++a) base_out[a * stride] += scale * acc[a];
        }
    }
}

// Dense matrix application along one spatial axis (non-convolutional
// kernels): out[..., a, ...] += scale * sum_b M[a*N + b] in[..., b, ...].
inline void axis_matrix_add(const double* in, double* out, const std::vector<double>& M, int axis,
                            int n, int N, double scale) {
    std::size_t stride = 1;
    for (int d = axis + 1; d < n; ++d) stride *= static_cast<std::size_t>(N);
    std::size_t block = stride * static_cast<std::size_t>(N);
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(N);
    std::size_t nblocks = total / block;

    std::vector<double> line(N);
    for (std::size_t blk = 0; blk < nblocks; ++blk) {
        for (std::size_t off = 0; off < stride; ++off) {
            const double* base_in = in + blk * block + off;
            double* base_out = out + blk * block + off;
            for (int b = 0; b < N; ++b) line[b] = base_in[b * stride];
            for (int a = 0; a < N; ++a) {
                const double* mrow = M.data() + static_cast<std::size_t>(a) * N;
                double s = 0.0;
                for (int b = 0; b < N; ++b) s += mrow[b] * line[b];
                base_out[a * stride] += scale * s;
            }
        }
    }
}

}  // namespace parlab::periodic
