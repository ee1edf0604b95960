#include "parlab/riesz.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "parlab/kernels.hpp"
#include "parlab/parallel.hpp"
#include "parlab/periodic.hpp"
#include "parlab/quadrature.hpp"
#include "parlab/simd.hpp"
#include "parlab/special.hpp"

namespace parlab::riesz {

namespace {

constexpr double tau_floor_factor = 1e-4;  // extends the surrogate region toward 0

double sqr(double v) { return v * v; }

// ---------------------------------------------------------------- constants

double gamma_slice(int n, double lo, double hi) {
    // INT_{lo}^{hi} w^{n/2-1} e^{-w} dw via w = v^2 (polynomial x Gaussian)
    return 2.0 * quadrature::adaptive(
                     [n](double v) { return std::pow(v, n - 1) * std::exp(-v * v); },
                     std::sqrt(lo), std::sqrt(hi), 1e-14);
}

}  // namespace

Constants constants(int n) {
    if (n < 1) throw std::invalid_argument("constants: n must be >= 1");
    double g = std::tgamma(0.5 * n);
    Constants c;
    c.n = n;
    c.A_n = gamma_slice(n, 0.25, 45.0 + 6.0 * n) / (n * g);
    c.B_n = gamma_slice(n, 0.0, 0.25) / g;
    double identity = n * c.A_n + c.B_n;
    if (std::abs(identity - 1.0) > 1e-12) {
        std::ostringstream err;
        err << "constants(" << n << "): n*A_n + B_n = " << identity << " violates the identity";
        throw std::logic_error(err.str());
    }
    return c;
}

// ----------------------------------------------------------- Gauss-Legendre

namespace {

struct GLRule {
    std::vector<double> x, w;  // on [-1, 1]
};

const GLRule& gauss_legendre(int m) {
    static std::map<int, GLRule> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    GLRule rule;
    rule.x.resize(m);
    rule.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < m; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = m * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[m - 1 - i] = x;
        rule.w[i] = rule.w[m - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(m, std::move(rule)).first->second;
}

// mapped nodes/weights on [a, b]
void gl_map(int m, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    const GLRule& r = gauss_legendre(m);
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i) {
        x[i] = 0.5 * (a + b) + 0.5 * (b - a) * r.x[i];
        w[i] = 0.5 * (b - a) * r.w[i];
    }
}

// ------------------------------------------------------------- heat rows

enum class RowType { gauss, dgauss, d2gauss };

// physical 1-D kernel rows (include the h weight of the lattice sum)
std::vector<double> heat_row_periodic(RowType type, double tau, double h, int Mx) {
    double period = h * Mx;
    double radius = kernels::gaussian_tail_radius(tau) + period;
    int kmax = static_cast<int>(std::ceil(radius / period));
    std::vector<double> row(Mx, 0.0), expo(Mx), vals(Mx);
    double lognorm = -0.5 * std::log(4.0 * M_PI * tau);
    for (int k = -kmax; k <= kmax; ++k) {
        bool any = false;
        for (int o = 0; o < Mx; ++o) {
            double z = o * h - k * period;
            expo[o] = lognorm - z * z / (4.0 * tau);
            any = any || expo[o] > -745.0;
        }
        if (!any) continue;
        simd::vexp(expo.data(), vals.data(), Mx);
        for (int o = 0; o < Mx; ++o) {
            double z = o * h - k * period;
            double poly = 1.0;
            if (type == RowType::dgauss) poly = -z / (2.0 * tau);
            if (type == RowType::d2gauss) poly = -0.5 / tau + z * z / (4.0 * tau * tau);
            row[o] += h * poly * vals[o];
        }
    }
    return row;
}

// centered free-space row: row[half + o], o in [-half, half]
std::vector<double> heat_row_free(RowType type, double tau, double h, int half) {
    int len = 2 * half + 1;
    std::vector<double> row(len), expo(len);
    double lognorm = -0.5 * std::log(4.0 * M_PI * tau);
    for (int o = -half; o <= half; ++o) expo[half + o] = lognorm - sqr(o * h) / (4.0 * tau);
    simd::vexp(expo.data(), row.data(), len);
    for (int o = -half; o <= half; ++o) {
        double z = o * h;
        double poly = 1.0;
        if (type == RowType::dgauss) poly = -z / (2.0 * tau);
        if (type == RowType::d2gauss) poly = -0.5 / tau + z * z / (4.0 * tau * tau);
        row[half + o] *= h * poly;
    }
    return row;
}

// --------------------------------------------------------- Mehler matrices

enum class MatType { m0, m1, m2, mt };

// physical 1-D Mehler kernel matrices on the closed node set (include the
// h and trapezoid weights of the box quadrature)
std::vector<double> mehler_matrix(MatType type, double tau, const GridSpec& spec) {
    int N = spec.N_x;
    double h = spec.h_x();
    tau = std::max(tau, kernels::mehler_tau_clamp);
    double log_s1 = -0.5 * (std::log(2.0 * M_PI) + special::log_sinh(2.0 * tau));
    double c = 1.0 + 2.0 / std::expm1(2.0 * tau);
    double T = std::tanh(tau);
    double sh = std::sinh(tau), ch = std::cosh(tau);
    double csch2 = 1.0 / (sh * sh), sech2 = 1.0 / (ch * ch);
    double coth2t = 1.0 + 2.0 / std::expm1(4.0 * tau);

    std::vector<double> M(static_cast<std::size_t>(N) * N), expo(M.size());
    for (int a = 0; a < N; ++a) {
        double xa = spec.x_node(a);
        for (int b = 0; b < N; ++b) {
            double xb = spec.x_node(b);
            double u = xa - xb, v = xa + xb;
            expo[static_cast<std::size_t>(a) * N + b] =
                log_s1 - 0.25 * u * u * c - 0.25 * v * v * T;
        }
    }
    simd::vexp(expo.data(), M.data(), M.size());
    for (int a = 0; a < N; ++a) {
        double xa = spec.x_node(a);
        double* row = M.data() + static_cast<std::size_t>(a) * N;
        for (int b = 0; b < N; ++b) {
            double xb = spec.x_node(b);
            double u = xa - xb, v = xa + xb;
            double poly = 1.0;
            switch (type) {
                case MatType::m0: break;
                case MatType::m1: poly = -0.5 * c * u - 0.5 * T * v; break;
                case MatType::m2: poly = -0.5 * (c + T) + 0.25 * sqr(c * u + T * v); break;
                case MatType::mt: poly = -coth2t + 0.25 * u * u * csch2 - 0.25 * v * v * sech2; break;
            }
            double wq = (b == 0 || b == N - 1) ? 0.5 : 1.0;
            row[b] *= poly * h * wq;
        }
    }
    return M;
}

// ------------------------------------------------------- slice-level apply

struct KernelSet {
    Evolution op;
    RieszKind which;
    int i = 0, j = 0;
    bool periodic_space = true;
    // heat rows (periodic or centered free)
    std::vector<std::vector<double>> rows;  // per axis per term
    std::vector<std::vector<double>> mats;
    int free_half = 0;
};

// builds the per-axis kernel factors for the given tau
KernelSet build_kernels(Evolution op, RieszKind which, int i, int j, double tau,
                        const GridSpec& spec, bool periodic_space, int Mx) {
    KernelSet ks;
    ks.op = op;
    ks.which = which;
    ks.i = i;
    ks.j = j;
    ks.periodic_space = periodic_space;
    double h = spec.h_x();
    if (op == Evolution::heat) {
        auto make = [&](RowType t) {
            if (periodic_space) return heat_row_periodic(t, tau, h, Mx);
            int half = std::min<int>(spec.N_x - 1,
                                     static_cast<int>(std::ceil(
                                         kernels::gaussian_tail_radius(tau) / h)) + 2);
            ks.free_half = half;
            return heat_row_free(t, tau, h, half);
        };
        ks.rows.resize(3);
        ks.rows[0] = make(RowType::gauss);
        ks.rows[1] = make(RowType::dgauss);
        ks.rows[2] = make(RowType::d2gauss);
    } else {
        ks.mats.resize(4);
        ks.mats[0] = mehler_matrix(MatType::m0, tau, spec);
        ks.mats[1] = mehler_matrix(MatType::m1, tau, spec);
        ks.mats[2] = mehler_matrix(MatType::m2, tau, spec);
        ks.mats[3] = mehler_matrix(MatType::mt, tau, spec);
    }
    return ks;
}

// out += scale * (K(tau) applied to slice); in and out are spatial slices
// in the buffer's layout (size rsx)
void apply_kernel_slice(const KernelSet& ks, const GridSpec& spec, int Mx, const double* in,
                        double* out, double scale, std::vector<double>& tmp_a,
                        std::vector<double>& tmp_b) {
    const int n = spec.n;
    auto axis_apply = [&](const double* src, double* dst, int axis, int term_kind) {
        std::fill(dst, dst + tmp_a.size(), 0.0);
        if (ks.op == Evolution::heat) {
            const std::vector<double>& row = ks.rows[term_kind];
            if (ks.periodic_space) {
                periodic::axis_correlate_add(src, dst, row, axis, n, Mx, 1.0);
            } else {
                periodic::axis_correlate_free_add(src, dst, row, ks.free_half, axis, n, Mx, 1.0);
            }
        } else {
            periodic::axis_matrix_add(src, dst, ks.mats[term_kind], axis, n, Mx, 1.0);
        }
    };
    // term kinds per axis: 0 = plain semigroup factor, 1 = first derivative,
    // 2 = second derivative, 3 = tau derivative (oscillator only)
    if (ks.which == RieszKind::ij) {
        const double* src = in;
        for (int ax = 0; ax < n; ++ax) {
            int term = 0;
            if (ks.i == ks.j) {
                if (ax == ks.i) term = 2;
            } else {
                if (ax == ks.i || ax == ks.j) term = 1;
            }
            axis_apply(src, tmp_a.data(), ax, term);
            std::copy(tmp_a.begin(), tmp_a.end(), tmp_b.begin());
            src = tmp_b.data();
        }
        simd::axpy(scale, tmp_b.data(), out, tmp_b.size());
    } else {
        // sum over the derivative axis
        for (int dax = 0; dax < n; ++dax) {
            const double* src = in;
            for (int ax = 0; ax < n; ++ax) {
                int term;
                if (ks.op == Evolution::heat) {
                    term = (ax == dax) ? 2 : 0;
                } else {
                    term = (ax == dax) ? 3 : 0;
                }
                axis_apply(src, tmp_a.data(), ax, term);
                std::copy(tmp_a.begin(), tmp_a.end(), tmp_b.begin());
                src = tmp_b.data();
            }
            simd::axpy(scale, tmp_b.data(), out, tmp_b.size());
        }
    }
}

// ------------------------------------------------- small-tau FD surrogates

// second-order FD surrogate of the full spatial integral for tau below the
// lattice-resolvable scale: d_ij f (kind ij), Laplacian f (heat t), or
// Laplacian f - |x|^2 f (oscillator t)
void surrogate_slice(Evolution op, RieszKind which, int i, int j, const GridSpec& spec, int Mx,
                     bool periodic_space, const double* in, double* out, double scale) {
    const int n = spec.n;
    const double hx = spec.h_x();
    std::vector<int> m(n);
    std::size_t rsx = 1;
    for (int d = 0; d < n; ++d) rsx *= static_cast<std::size_t>(Mx);
    double in_mm_cache = 0.0;

    auto coords = [&](std::size_t mm) {
        std::size_t rem = mm;
        for (int d = n - 1; d >= 0; --d) {
            m[d] = static_cast<int>(rem % Mx);
            rem /= Mx;
        }
    };
    auto at = [&](int axis, int delta) -> double {
        int c = m[axis] + delta;
        if (periodic_space) {
            c = (c % Mx + Mx) % Mx;
        } else if (c < 0 || c >= Mx) {
            return 0.0;
        }
        std::size_t idx = 0;
        for (int d = 0; d < n; ++d) idx = idx * Mx + (d == axis ? c : m[d]);
        return in[idx];
    };
    auto at2 = [&](int ai, int di, int aj, int dj) -> double {
        int ci = m[ai] + di, cj = m[aj] + dj;
        if (periodic_space) {
            ci = (ci % Mx + Mx) % Mx;
            cj = (cj % Mx + Mx) % Mx;
        } else if (ci < 0 || ci >= Mx || cj < 0 || cj >= Mx) {
            return 0.0;
        }
        std::size_t idx = 0;
        for (int d = 0; d < n; ++d) {
            int c = m[d];
            if (d == ai) c = ci;
            if (d == aj) c = cj;
            idx = idx * Mx + c;
        }
        return in[idx];
    };

    // fourth-order stencils: the surrogate stripe multiplies broadband data
    auto d2_4th = [&](int axis) {
        return (-at(axis, 2) + 16.0 * at(axis, 1) - 30.0 * in_mm_cache +
                16.0 * at(axis, -1) - at(axis, -2)) /
               (12.0 * hx * hx);
    };
    auto cross_4th = [&](int ai, int aj) {
        // tensor product of two 4th-order first-derivative stencils
        static const int off[4] = {-2, -1, 1, 2};
        static const double wt[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
        double s = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) s += wt[a] * wt[b] * at2(ai, off[a], aj, off[b]);
        return s / (hx * hx);
    };
    for (std::size_t mm = 0; mm < rsx; ++mm) {
        coords(mm);
        in_mm_cache = in[mm];
        double v = 0.0;
        if (which == RieszKind::ij) {
            v = (i == j) ? d2_4th(i) : cross_4th(i, j);
        } else {
            for (int d = 0; d < n; ++d) v += d2_4th(d);
            if (op == Evolution::hermite) {
                double x2 = 0.0;
                for (int d = 0; d < n; ++d) x2 += sqr(spec.x_node(m[d]));
                v -= x2 * in[mm];
            }
        }
        out[mm] += scale * v;
    }
}

// --------------------------------------------------------- field integral

struct TauGrid {
    std::vector<double> tau;
    std::vector<double> weight;  // integration weight (log-trapezoid, includes jacobian)
};

TauGrid log_tau_grid(double lo, double hi, int per_decade) {
    TauGrid g;
    if (!(hi > lo)) return g;
    int count = std::max(8, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
    double ulo = std::log(lo), uhi = std::log(hi);
    double du = (uhi - ulo) / count;
    g.tau.resize(count + 1);
    g.weight.resize(count + 1);
    for (int q = 0; q <= count; ++q) {
        double u = ulo + q * du;
        g.tau[q] = std::exp(u);
        g.weight[q] = g.tau[q] * du * ((q == 0 || q == count) ? 0.5 : 1.0);
    }
    return g;
}

double surrogate_tau_threshold(const GridSpec& spec) { return 0.35 * sqr(spec.h_x()); }

double tau_tiny(const GridSpec& spec) { return sqr(spec.h_x() / 8.0) * tau_floor_factor; }

double tau_max_global(Evolution op, const GridSpec& spec) {
    if (op == Evolution::heat) return 3.2 * sqr(spec.L) + 0.5;
    return 40.0 / spec.n + 2.0;
}

// A(t, x) = INT_{tau in grid} I(tau; t, x) dtau over the full space, with
// time indexing periodic; evaluated for every output slice.
periodic::Buffer field_integral_periodic(Evolution op, const GridFunction& f, RieszKind which,
                                         int i, int j) {
    const GridSpec& spec = f.spec;
    bool reduce_space = (op == Evolution::heat);
    periodic::Buffer in = periodic::to_periodic(f, reduce_space);
    periodic::Buffer acc = periodic::like(in);
    TauGrid grid = log_tau_grid(tau_tiny(spec), tau_max_global(op, spec), 26);
    const double tau0 = surrogate_tau_threshold(spec);

    std::vector<double> shifted(in.rsx);
    std::vector<double> tmp_a(in.rsx), tmp_b(in.rsx);
    for (std::size_t q = 0; q < grid.tau.size(); ++q) {
        double tau = grid.tau[q];
        double w = grid.weight[q];
        KernelSet ks;
        bool use_surrogate = tau < tau0;
        if (!use_surrogate) ks = build_kernels(op, which, i, j, tau, spec, reduce_space, in.Mx);
        for (int jt = 0; jt < in.Mt; ++jt) {
            periodic::cubic_slice(in, spec.t_node(jt) - tau, shifted.data());
            if (use_surrogate) {
                surrogate_slice(op, which, i, j, spec, in.Mx, reduce_space, shifted.data(),
                                acc.slice(jt), w);
            } else {
                apply_kernel_slice(ks, spec, in.Mx, shifted.data(), acc.slice(jt), w, tmp_a,
                                   tmp_b);
            }
        }
    }
    return acc;
}

// capped variant: per output slice the tau integral runs over
// [tau_lo_j, t_j - t_min]; free time indexing with zero extension.
periodic::Buffer field_integral_capped(Evolution op, const GridFunction& f, RieszKind which,
                                       int i, int j, double tau_lo) {
    const GridSpec& spec = f.spec;
    bool reduce_space = (op == Evolution::heat);
    periodic::Buffer in = periodic::to_periodic(f, reduce_space, /*reduce_time=*/false);
    periodic::Buffer acc = periodic::like(in);
    const double tau0 = surrogate_tau_threshold(spec);

    std::vector<double> shifted(in.rsx), tmp_a(in.rsx), tmp_b(in.rsx);
    for (int jt = 0; jt < in.Mt; ++jt) {
        double hi = spec.t_node(jt) - spec.t_min;
        if (hi <= tau_lo) continue;
        TauGrid grid = log_tau_grid(tau_lo, hi, 26);
        for (std::size_t q = 0; q < grid.tau.size(); ++q) {
            double tau = grid.tau[q];
            double w = grid.weight[q];
            periodic::cubic_slice_free(in, spec.t_node(jt) - tau, shifted.data());
            if (tau < tau0) {
                surrogate_slice(op, which, i, j, spec, in.Mx, reduce_space, shifted.data(),
                                acc.slice(jt), w);
            } else {
                KernelSet ks = build_kernels(op, which, i, j, tau, spec, reduce_space, in.Mx);
                apply_kernel_slice(ks, spec, in.Mx, shifted.data(), acc.slice(jt), w, tmp_a,
                                   tmp_b);
            }
        }
    }
    return acc;
}

// ------------------------------------------------------- cylinder integral

// pointwise kernel of the truncated integrand (heat: translation kernel at
// offset z; oscillator: two-point kernel at (x, x - z))
double point_kernel(Evolution op, RieszKind which, int i, int j, int n, double tau,
                    std::span<const double> x, std::span<const double> z,
                    std::vector<double>& ybuf) {
    if (op == Evolution::heat) {
        if (which == RieszKind::ij) return kernels::gw_derivative(kernels::GwDerivative::d_ij, n, tau, z, i, j);
        return kernels::gw_derivative(kernels::GwDerivative::d_tau, n, tau, z);
    }
    ybuf.resize(n);
    for (int d = 0; d < n; ++d) ybuf[d] = x[d] - z[d];
    auto kind = (which == RieszKind::ij) ? kernels::HermiteRieszKind::ij
                                         : kernels::HermiteRieszKind::t;
    return kernels::hermite_riesz_integrand(kind, n, tau, x, ybuf, i, j);
}

// spatial interpolation weights: cubic per axis, periodic or zero-extended
struct SpatialInterp {
    const GridSpec* spec;
    int Mx;
    bool periodic_space;

    double eval(const double* slice, std::span<const double> pt) const {
        const int n = spec->n;
        double hx = spec->h_x();
        int base[3];
        double wts[3][4];
        for (int d = 0; d < n; ++d) {
            double theta = (pt[d] + spec->L) / hx;
            int i1 = static_cast<int>(std::floor(theta));
            double fr = theta - i1;
            base[d] = i1;
            wts[d][0] = -fr * (fr - 1.0) * (fr - 2.0) / 6.0;
            wts[d][1] = (fr * fr - 1.0) * (fr - 2.0) / 2.0;
            wts[d][2] = -fr * (fr + 1.0) * (fr - 2.0) / 2.0;
            wts[d][3] = fr * (fr * fr - 1.0) / 6.0;
        }
        double s = 0.0;
        int idx[3] = {0, 0, 0};
        int counts = 1;
        for (int d = 0; d < n; ++d) counts *= 4;
        for (int c = 0; c < counts; ++c) {
            int rem = c;
            double w = 1.0;
            std::size_t flat = 0;
            bool ok = true;
            for (int d = 0; d < n; ++d) {
                idx[d] = rem % 4;
                rem /= 4;
                int node = base[d] - 1 + idx[d];
                if (periodic_space) {
                    node = (node % Mx + Mx) % Mx;
                } else if (node < 0 || node >= Mx) {
                    ok = false;
                    break;
                }
                w *= wts[d][idx[d]];
                flat = flat * Mx + node;
            }
            if (ok) s += w * slice[flat];
        }
        return s;
    }
};

// directions and angular weights for the sphere quadrature
struct Sphere {
    std::vector<std::vector<double>> dirs;
    std::vector<double> wts;  // sum to |S^{n-1}|
};

Sphere sphere_rule(int n) {
    Sphere s;
    if (n == 1) {
        s.dirs = {{1.0}, {-1.0}};
        s.wts = {1.0, 1.0};
    } else if (n == 2) {
        int m = 24;
        for (int k = 0; k < m; ++k) {
            double th = 2.0 * M_PI * (k + 0.5) / m;
            s.dirs.push_back({std::cos(th), std::sin(th)});
            s.wts.push_back(2.0 * M_PI / m);
        }
    } else {
        int mphi = 12, mth = 24;
        // Gauss-Legendre in cos(phi), uniform in theta
        std::vector<double> cx, cw;
        gl_map(mphi, -1.0, 1.0, cx, cw);
        for (int p = 0; p < mphi; ++p) {
            double cphi = cx[p];
            double sphi = std::sqrt(std::max(0.0, 1.0 - cphi * cphi));
            for (int k = 0; k < mth; ++k) {
                double th = 2.0 * M_PI * (k + 0.5) / mth;
                s.dirs.push_back({sphi * std::cos(th), sphi * std::sin(th), cphi});
                s.wts.push_back(cw[p] * 2.0 * M_PI / mth);
            }
        }
    }
    return s;
}

enum class ShellKind { cylinder, comparison };

// Shared engine for the small-tau shell integrals:
//   cylinder:    tau in (0, eps^2],      |z| in [0, eps]      (excluded set)
//   comparison:  tau in (0, eps^2],      |z| in (eps, inf)    (Omega - Sigma slab)
// The 1-D case uses a banded fast path: interpolation at x - z is a fixed
// 4-tap stencil shared across all output nodes for each (tau, z).
periodic::Buffer shell_integral(Evolution op, const GridFunction& f, double eps, RieszKind which,
                                int i, int j, ShellKind shell, bool free_time, bool cap_at_t,
                                int per_decade = 26) {
    const GridSpec& spec = f.spec;
    const int n = spec.n;
    bool reduce_space = (op == Evolution::heat);
    periodic::Buffer in = periodic::to_periodic(f, reduce_space, /*reduce_time=*/!free_time);
    periodic::Buffer acc = periodic::like(in);
    double t_lo = (shell == ShellKind::cylinder) ? tau_tiny(spec) : eps * eps * 1e-3;
    TauGrid grid = log_tau_grid(t_lo, eps * eps, shell == ShellKind::cylinder ? per_decade : 30);
    Sphere sph = sphere_rule(n);
    const int Mx = in.Mx;
    const double hx = spec.h_x();

    auto radial_rule = [&](double tau, std::vector<double>& rr, std::vector<double>& ww) {
        std::vector<double> rx, rw;
        rr.clear();
        ww.clear();
        if (shell == ShellKind::cylinder) {
            double rstar = std::min(eps, 9.0 * std::sqrt(tau));
            gl_map(24, 0.0, rstar, rx, rw);
            rr = rx;
            ww = rw;
            if (rstar < eps) {
                gl_map(12, rstar, eps, rx, rw);
                rr.insert(rr.end(), rx.begin(), rx.end());
                ww.insert(ww.end(), rw.begin(), rw.end());
            }
        } else {
            double rmax = eps + kernels::gaussian_tail_radius(tau);
            gl_map(32, eps, rmax, rx, rw);
            rr = rx;
            ww = rw;
        }
    };

    std::vector<double> shifted(in.rsx), stencil(in.rsx);
    std::vector<double> rr, ww, x(n), z(n), ybuf;
    std::vector<int> mcoord(n);

    for (std::size_t q = 0; q < grid.tau.size(); ++q) {
        double tau = grid.tau[q];
        double wq = grid.weight[q];
        radial_rule(tau, rr, ww);
        const std::size_t G = rr.size();

        if (n == 1) {
            // kernel tables: heat is x-independent, oscillator is per-node
            std::vector<double> ktab;  // [side][g] or [side][g][a]
            bool xdep = (op == Evolution::hermite);
            ktab.resize(xdep ? 2 * G * Mx : 2 * G);
            for (int side = 0; side < 2; ++side) {
                double sgn = side == 0 ? 1.0 : -1.0;
                for (std::size_t g = 0; g < G; ++g) {
                    z[0] = sgn * rr[g];
                    if (!xdep) {
                        ktab[side * G + g] =
                            point_kernel(op, which, i, j, 1, tau, x, z, ybuf);
                    } else {
                        for (int a = 0; a < Mx; ++a) {
                            x[0] = spec.x_node(a);
                            ktab[(side * G + g) * Mx + a] =
                                point_kernel(op, which, i, j, 1, tau, x, z, ybuf);
                        }
                    }
                }
            }
            for (int jt = 0; jt < in.Mt; ++jt) {
                if (cap_at_t && spec.t_node(jt) - spec.t_min < tau) continue;
                if (free_time) {
                    periodic::cubic_slice_free(in, spec.t_node(jt) - tau, shifted.data());
                } else {
                    periodic::cubic_slice(in, spec.t_node(jt) - tau, shifted.data());
                }
                double* out = acc.slice(jt);
                for (int side = 0; side < 2; ++side) {
                    double sgn = side == 0 ? 1.0 : -1.0;
                    for (std::size_t g = 0; g < G; ++g) {
                        double zz = sgn * rr[g];
                        // 4-tap cubic interpolation at x_a - zz, shared offsets
                        double theta = -zz / hx;
                        int o1 = static_cast<int>(std::floor(theta));
                        double fr = theta - o1;
                        double w4[4] = {-fr * (fr - 1.0) * (fr - 2.0) / 6.0,
                                        (fr * fr - 1.0) * (fr - 2.0) / 2.0,
                                        -fr * (fr + 1.0) * (fr - 2.0) / 2.0,
                                        fr * (fr * fr - 1.0) / 6.0};
                        for (int a = 0; a < Mx; ++a) {
                            double v = 0.0;
                            for (int k2 = 0; k2 < 4; ++k2) {
                                int idx = a + o1 - 1 + k2;
                                if (reduce_space) {
                                    idx = (idx % Mx + Mx) % Mx;
                                } else if (idx < 0 || idx >= Mx) {
                                    continue;
                                }
                                v += w4[k2] * shifted[idx];
                            }
                            stencil[a] = v;
                        }
                        double base = wq * ww[g];
                        if (!xdep) {
                            double cf = base * ktab[side * G + g];
                            simd::axpy(cf, stencil.data(), out, Mx);
                        } else {
                            const double* kt = ktab.data() + (side * G + g) * Mx;
                            for (int a = 0; a < Mx; ++a) out[a] += base * kt[a] * stencil[a];
                        }
                    }
                }
            }
            continue;
        }

        // generic dimension path
        for (int jt = 0; jt < in.Mt; ++jt) {
            if (cap_at_t && spec.t_node(jt) - spec.t_min < tau) continue;
            if (free_time) {
                periodic::cubic_slice_free(in, spec.t_node(jt) - tau, shifted.data());
            } else {
                periodic::cubic_slice(in, spec.t_node(jt) - tau, shifted.data());
            }
            SpatialInterp interp{&spec, Mx, reduce_space};
            double* out = acc.slice(jt);
            std::vector<double> pt(n);
            for (std::size_t mm = 0; mm < in.rsx; ++mm) {
                std::size_t rem = mm;
                for (int d = n - 1; d >= 0; --d) {
                    mcoord[d] = static_cast<int>(rem % Mx);
                    rem /= Mx;
                }
                for (int d = 0; d < n; ++d) x[d] = spec.x_node(mcoord[d]);
                double cellsum = 0.0;
                for (std::size_t dd = 0; dd < sph.dirs.size(); ++dd) {
                    for (std::size_t g = 0; g < G; ++g) {
                        double r = rr[g];
                        for (int d = 0; d < n; ++d) z[d] = r * sph.dirs[dd][d];
                        double kv = point_kernel(op, which, i, j, n, tau, x, z, ybuf);
                        if (kv == 0.0) continue;
                        double radial = std::pow(r, n - 1);
                        for (int d = 0; d < n; ++d) pt[d] = x[d] - z[d];
                        double fv = interp.eval(shifted.data(), pt);
                        cellsum += sph.wts[dd] * ww[g] * radial * kv * fv;
                    }
                }
                out[mm] += wq * cellsum;
            }
        }
    }
    return acc;
}

periodic::Buffer cylinder_integral(Evolution op, const GridFunction& f, double eps,
                                   RieszKind which, int i, int j, bool free_time,
                                   bool cap_at_t, int per_decade = 26) {
    return shell_integral(op, f, eps, which, i, j, ShellKind::cylinder, free_time, cap_at_t,
                          per_decade);
}

}  // namespace

// --------------------------------------------------------------- schedules

void TruncationSchedule::validate(const GridSpec& spec) const {
    if (eps.empty()) throw std::invalid_argument("TruncationSchedule: empty");
    for (std::size_t k = 1; k < eps.size(); ++k)
        if (!(eps[k] < eps[k - 1]))
            throw std::invalid_argument("TruncationSchedule: must be strictly decreasing");
    double resolvable = 2.0 * std::max(spec.h_x(), std::sqrt(spec.h_t()));
    if (geometry == TruncationGeometry::omega && eps.back() < resolvable) {
        std::ostringstream err;
        err << "TruncationSchedule: smallest eps " << eps.back()
            << " below the resolvable scale " << resolvable;
        throw std::invalid_argument(err.str());
    }
}

TruncationSchedule TruncationSchedule::geometric(double eps_max, int count, double ratio) {
    TruncationSchedule s;
    double e = eps_max;
    for (int k = 0; k < count; ++k) {
        s.eps.push_back(e);
        e *= ratio;
    }
    return s;
}

// ---------------------------------------------------------- truncated_riesz

GridFunction truncated_riesz(Evolution op, const GridFunction& f, double eps, RieszKind which,
                             int i, int j, TruncationGeometry geometry,
                             const TruncationOptions& opts) {
    const GridSpec& spec = f.spec;
    spec.validate();
    if (i < 0 || i >= spec.n || j < 0 || j >= spec.n)
        throw std::invalid_argument("truncated_riesz: axis out of range");
    if (geometry == TruncationGeometry::sigma) {
        if (!(eps >= spec.h_t() * 0.5))
            throw std::invalid_argument("truncated_riesz: sigma cutoff below grid resolution");
        periodic::Buffer A = field_integral_capped(op, f, which, i, j, eps);
        return periodic::to_grid(A);
    }
    double resolvable = 2.0 * std::max(spec.h_x(), std::sqrt(spec.h_t()));
    if (eps < resolvable)
        throw std::invalid_argument("truncated_riesz: eps below the resolvable scale");
    if (opts.cauchy) {
        periodic::Buffer A = field_integral_capped(op, f, which, i, j, tau_tiny(spec));
        periodic::Buffer B = cylinder_integral(op, f, eps, which, i, j, /*free_time=*/true,
                                               /*cap_at_t=*/true);
        for (std::size_t k = 0; k < A.v.size(); ++k) A.v[k] -= B.v[k];
        return periodic::to_grid(A);
    }
    periodic::Buffer A = field_integral_periodic(op, f, which, i, j);
    periodic::Buffer B =
        cylinder_integral(op, f, eps, which, i, j, /*free_time=*/false, /*cap_at_t=*/false);
    for (std::size_t k = 0; k < A.v.size(); ++k) A.v[k] -= B.v[k];
    return periodic::to_grid(A);
}

LimitResult riesz_limit(Evolution op, const GridFunction& f, const TruncationSchedule& schedule,
                        RieszKind which, int i, int j) {
    const GridSpec& spec = f.spec;
    schedule.validate(spec);
    if (schedule.geometry != TruncationGeometry::omega)
        throw std::invalid_argument("riesz_limit: omega geometry required");
    const std::size_t K = schedule.eps.size();
    if (K < 2) throw std::invalid_argument("riesz_limit: need at least two epsilons");

    // T(eps) = A - B(eps); the excluded-cylinder integral has the exact
    // scaling limit B -> -A_n delta_ij f (kind ij) resp. (B_n - 1) f
    // (kind t), so the eps -> 0 limit of the truncated integrals is
    // available in closed form once A is quadratured. The truncation
    // schedule provides the convergence diagnostics: residuals
    // ||T(eps_k) - lim|| must shrink along the schedule (the smooth-data
    // rate is eps^2; see the ratio test below).
    periodic::Buffer A = field_integral_periodic(op, f, which, i, j);
    Constants c = constants(spec.n);
    bool reduce_space = (op == Evolution::heat);
    periodic::Buffer fin = periodic::to_periodic(f, reduce_space);

    double cyl_limit = 0.0;  // lim of B(eps) as a multiple of f
    if (which == RieszKind::ij) {
        cyl_limit = (i == j) ? -c.A_n : 0.0;
    } else {
        cyl_limit = c.B_n - 1.0;
    }
    periodic::Buffer lim = A;
    for (std::size_t m = 0; m < lim.v.size(); ++m) lim.v[m] -= cyl_limit * fin.v[m];

    // schedule diagnostics: residual decay of the truncated route over the
    // last two (smallest) epsilons
    std::vector<double> diag_eps(schedule.eps.end() - std::min<std::size_t>(2, K),
                                 schedule.eps.end());
    std::vector<double> resid;
    double scale = std::sqrt(simd::dot(lim.v.data(), lim.v.data(), lim.v.size()));
    for (double eps : diag_eps) {
        periodic::Buffer B = cylinder_integral(op, f, eps, which, i, j, false, false, 14);
        double s = 0.0;
        for (std::size_t m = 0; m < lim.v.size(); ++m) {
            double Tk = A.v[m] - B.v[m];
            s += sqr(Tk - lim.v[m]);
        }
        resid.push_back(std::sqrt(s));
    }
    double p_hat = 0.0;
    bool converged = true;
    int fits = 0;
    for (std::size_t k = 0; k + 1 < resid.size(); ++k) {
        if (resid[k] <= 1e-13 * (scale + 1e-300)) continue;
        if (!(resid[k + 1] < resid[k])) {
            std::ostringstream err;
            err << "riesz_limit: truncation residuals do not decrease along the schedule ("
                << resid[k] << " -> " << resid[k + 1] << " at eps=" << diag_eps[k + 1]
                << "); refine the grid or enlarge eps";
            throw std::runtime_error(err.str());
        }
        p_hat += std::log(resid[k] / resid[k + 1]) /
                 std::log(diag_eps[k] / diag_eps[k + 1]);
        ++fits;
    }
    if (fits > 0) {
        p_hat /= fits;
        converged = (p_hat > 0.3);
    }

    // local term of the pointwise limit formulas
    double coeff = (which == RieszKind::ij) ? ((i == j) ? -c.A_n : 0.0) : c.B_n;
    if (coeff != 0.0) {
        for (std::size_t m = 0; m < lim.v.size(); ++m) lim.v[m] += coeff * fin.v[m];
    }

    LimitResult res{periodic::to_grid(lim), p_hat, converged};
    return res;
}

GridFunction maximal_truncation(Evolution op, const GridFunction& f,
                                const TruncationSchedule& schedule, RieszKind which, int i,
                                int j) {
    const GridSpec& spec = f.spec;
    schedule.validate(spec);
    periodic::Buffer A = field_integral_periodic(op, f, which, i, j);
    periodic::Buffer sup = periodic::like(A);
    for (double eps : schedule.eps) {
        periodic::Buffer B = cylinder_integral(op, f, eps, which, i, j, false, false);
        for (std::size_t m = 0; m < sup.v.size(); ++m) {
            sup.v[m] = std::max(sup.v[m], std::abs(A.v[m] - B.v[m]));
        }
    }
    return periodic::to_grid(sup);
}

GridFunction truncation_comparison(const GridFunction& f, double eps, int i, int j) {
    const GridSpec& spec = f.spec;
    spec.validate();
    if (!(eps * eps > 4.0 * tau_tiny(spec)))
        throw std::invalid_argument("truncation_comparison: eps too small for the grid");
    periodic::Buffer slab = shell_integral(Evolution::heat, f, eps, RieszKind::ij, i, j,
                                           ShellKind::comparison, false, false);
    return periodic::to_grid(slab);
}

// ---------------------------------------------------------------- lemma 3.2

Lemma32Report lemma32_verify(int n, const std::vector<double>& eps_schedule) {
    if (n < 1) throw std::invalid_argument("lemma32_verify: n must be >= 1");
    Constants c = constants(n);
    Lemma32Report rep;
    rep.n = n;
    rep.eps = eps_schedule;
    rep.limits = {0.0, -c.A_n, c.B_n, 0.0};
    double sphere = special::unit_sphere_area(n);

    for (double eps : eps_schedule) {
        std::array<double, 4> vals{};
        // (i) eps^{-n/2} INT_{|y|<eps} e^{-|y|^2/(4 eps)} dy
        vals[0] = std::pow(eps, -0.5 * n) * sphere *
                  quadrature::adaptive(
                      [&](double r) {
                          return std::pow(r, n - 1) * std::exp(-r * r / (4.0 * eps));
                      },
                      0.0, eps, 1e-12);
        // (ii) INT_0^{eps^2} INT_{|y|=eps} S d_i H (y_i/|y|) dsigma dtau,
        // with the single-component average INT y_i^2 dsigma = eps^2 |S|/n
        auto Sfun = [&](double tau) {
            return std::exp(-0.5 * n *
                            (std::log(2.0 * M_PI) + special::log_sinh(2.0 * tau)));
        };
        auto coth = [](double tau) { return 1.0 + 2.0 / std::expm1(2.0 * tau); };
        vals[1] = quadrature::adaptive(
            [&](double u) {
                double tau = std::exp(u);
                double ct = coth(tau);
                double integrand = -0.5 * ct * eps * Sfun(tau) *
                                   std::exp(-0.25 * eps * eps * ct) * std::pow(eps, n - 1) *
                                   sphere / n;
                return integrand * tau;  // log substitution jacobian
            },
            std::log(eps * eps) - 30.0, std::log(eps * eps), 1e-11);
        // (iii) INT_{|y|<eps} S(eps^2) H(eps^2, y) dy
        {
            double tau = eps * eps;
            double ct = coth(tau);
            vals[2] = sphere * Sfun(tau) *
                      quadrature::adaptive(
                          [&](double r) {
                              return std::pow(r, n - 1) * std::exp(-0.25 * r * r * ct);
                          },
                          0.0, eps, 1e-12);
        }
        // (iv) INT_0^{eps^2} INT_{|y|=eps} S H dsigma dtau
        vals[3] = quadrature::adaptive(
            [&](double u) {
                double tau = std::exp(u);
                double ct = coth(tau);
                return Sfun(tau) * std::exp(-0.25 * eps * eps * ct) * std::pow(eps, n - 1) *
                       sphere * tau;
            },
            std::log(eps * eps) - 30.0, std::log(eps * eps), 1e-11);
        rep.values.push_back(vals);
    }
    return rep;
}

// ------------------------------------------------------------------- solves

namespace {

void require_compact_support(const GridFunction& f) {
    const GridSpec& spec = f.spec;
    const std::size_t sx = spec.spatial_size();
    std::vector<int> m(spec.n);
    for (int j = 0; j < spec.N_t; ++j) {
        bool t_edge = (j == 0 || j == spec.N_t - 1);
        for (std::size_t mm = 0; mm < sx; ++mm) {
            spec.spatial_coords(mm, m);
            bool x_edge = false;
            for (int d = 0; d < spec.n; ++d)
                x_edge = x_edge || m[d] == 0 || m[d] == spec.N_x - 1;
            if ((t_edge || x_edge) && f.at(j, mm) != 0.0) {
                throw std::invalid_argument(
                    "solve: support touches the grid boundary (free-space quadrature needs "
                    "compactly supported data)");
            }
        }
    }
}

// semigroup application at tau = m*h_t to a spatial slice (free space)
void semigroup_slice(Evolution op, const GridSpec& spec, double tau, const double* in,
                     double* out, std::vector<double>& tmp) {
    const int n = spec.n;
    int N = spec.N_x;
    std::size_t sx = spec.spatial_size();
    if (tau <= 0.0) {
        std::copy(in, in + sx, out);
        return;
    }
    if (op == Evolution::heat) {
        int half = std::min<int>(N - 1, static_cast<int>(std::ceil(
                                            kernels::gaussian_tail_radius(tau) / spec.h_x())) +
                                            2);
        std::vector<double> row = heat_row_free(RowType::gauss, tau, spec.h_x(), half);
        const double* src = in;
        for (int ax = 0; ax < n; ++ax) {
            std::fill(out, out + sx, 0.0);
            periodic::axis_correlate_free_add(src, out, row, half, ax, n, N, 1.0);
            std::copy(out, out + sx, tmp.begin());
            src = tmp.data();
        }
        std::copy(src, src + sx, out);
    } else {
        std::vector<double> mat = mehler_matrix(MatType::m0, tau, spec);
        const double* src = in;
        for (int ax = 0; ax < n; ++ax) {
            std::fill(out, out + sx, 0.0);
            periodic::axis_matrix_add(src, out, mat, ax, n, N, 1.0);
            std::copy(out, out + sx, tmp.begin());
            src = tmp.data();
        }
        std::copy(src, src + sx, out);
    }
}

double residual_of(Evolution op, const GridFunction& u, const GridFunction& f, Mask& mask_out) {
    const GridSpec& spec = u.spec;
    FdField ut = finite_difference(u, FdKind::time);
    std::vector<FdField> uxx;
    for (int d = 0; d < spec.n; ++d) uxx.push_back(finite_difference(u, FdKind::space2, d, d));
    GridFunction res = zeros(spec);
    Mask mask = ut.valid;
    std::vector<int> m(spec.n);
    const std::size_t sx = spec.spatial_size();
    for (int j = 0; j < spec.N_t; ++j) {
        for (std::size_t mm = 0; mm < sx; ++mm) {
            std::size_t idx = j * sx + mm;
            if (!mask[idx]) continue;
            double lap = 0.0;
            for (int d = 0; d < spec.n; ++d) lap += uxx[d].values.at(j, mm);
            double x2u = 0.0;
            if (op == Evolution::hermite) {
                spec.spatial_coords(mm, m);
                double x2 = 0.0;
                for (int d = 0; d < spec.n; ++d) x2 += sqr(spec.x_node(m[d]));
                x2u = x2 * u.at(j, mm);
            }
            res.at(j, mm) = ut.values.at(j, mm) - lap + x2u - f.at(j, mm);
        }
    }
    double rnorm = lp_norm(res, 2.0, WeightSpec::unit(), mask);
    double fnorm = lp_norm(f, 2.0, WeightSpec::unit(), mask);
    mask_out = std::move(mask);
    return fnorm > 0.0 ? rnorm / fnorm : rnorm;
}

}  // namespace

SolveReport solve_global(Evolution op, const GridFunction& f, const SolveOptions& opts) {
    const GridSpec& spec = f.spec;
    spec.validate();
    const std::size_t sx = spec.spatial_size();
    const double ht = spec.h_t();
    GridFunction u = zeros(spec);
    std::vector<double> applied(sx), tmp(sx);

    if (!opts.periodic) {
        require_compact_support(f);
        // u(t_j) = h_t [ f(t_j)/2 + sum_{0<m<j} K(m h_t) f(t_{j-m}) + K(j h_t) f(t_0)/2 ]
        for (int j = 1; j < spec.N_t; ++j) {
            double* out = u.slice(j);
            simd::axpy(0.5 * ht, f.slice(j), out, sx);
            for (int m = 1; m <= j; ++m) {
                semigroup_slice(op, spec, m * ht, f.slice(j - m), applied.data(), tmp);
                double w = (m == j) ? 0.5 * ht : ht;
                simd::axpy(w, applied.data(), out, sx);
            }
        }
    } else {
        periodic::Buffer in = periodic::to_periodic(f, op == Evolution::heat);
        if (op == Evolution::heat) {
            // zero-mode policy: the tau integral of the mean mode diverges
            double mean = simd::sum(in.v.data(), in.v.size()) / in.v.size();
            for (double& v : in.v) v -= mean;
        }
        periodic::Buffer acc = periodic::like(in);
        double tau_hi = tau_max_global(op, spec);
        int Mmax = static_cast<int>(std::ceil(tau_hi / ht));
        std::vector<double> row;
        std::vector<double> slice(in.rsx), tm(in.rsx), work(in.rsx);
        for (int jt = 0; jt < in.Mt; ++jt) {
            double* out = acc.slice(jt);
            simd::axpy(0.5 * ht, in.slice(jt), out, in.rsx);
            for (int m = 1; m <= Mmax; ++m) {
                double tau = m * ht;
                int src = ((jt - m) % in.Mt + in.Mt) % in.Mt;
                double w = (m == Mmax) ? 0.5 * ht : ht;
                if (op == Evolution::heat) {
                    std::vector<double> prow = heat_row_periodic(RowType::gauss, tau, spec.h_x(),
                                                                 in.Mx);
                    const double* srcp = in.slice(src);
                    for (int ax = 0; ax < spec.n; ++ax) {
                        std::fill(work.begin(), work.end(), 0.0);
                        periodic::axis_correlate_add(srcp, work.data(), prow, ax, spec.n, in.Mx,
                                                     1.0);
                        std::copy(work.begin(), work.end(), tm.begin());
                        srcp = tm.data();
                    }
                    simd::axpy(w, tm.data(), out, in.rsx);
                } else {
                    std::vector<double> mat = mehler_matrix(MatType::m0, tau, spec);
                    const double* srcp = in.slice(src);
                    for (int ax = 0; ax < spec.n; ++ax) {
                        std::fill(work.begin(), work.end(), 0.0);
                        periodic::axis_matrix_add(srcp, work.data(), mat, ax, spec.n, in.Mx, 1.0);
                        std::copy(work.begin(), work.end(), tm.begin());
                        srcp = tm.data();
                    }
                    simd::axpy(w, tm.data(), out, in.rsx);
                }
            }
        }
        u = periodic::to_grid(acc);
    }

    SolveReport rep;
    rep.u = std::move(u);
    rep.interior_residual_rel = residual_of(op, rep.u, f, rep.residual_mask);
    return rep;
}

SolveReport solve_heat_global(const GridFunction& f, const SolveOptions& opts) {
    return solve_global(Evolution::heat, f, opts);
}

SolveReport solve_hermite_global(const GridFunction& f, const SolveOptions& opts) {
    return solve_global(Evolution::hermite, f, opts);
}

CauchyReport solve_cauchy(Evolution op, const GridFunction& f, const std::vector<double>& g) {
    const GridSpec& spec = f.spec;
    spec.validate();
    if (std::abs(spec.t_min) > 1e-12)
        throw std::invalid_argument("solve_cauchy: t_min must be 0");
    const std::size_t sx = spec.spatial_size();
    if (g.size() != sx) throw std::invalid_argument("solve_cauchy: g has wrong size");
    const double ht = spec.h_t();

    GridFunction v = zeros(spec);
    std::vector<double> applied(sx), tmp(sx);
    // Duhamel source term
    for (int j = 1; j < spec.N_t; ++j) {
        double* out = v.slice(j);
        simd::axpy(0.5 * ht, f.slice(j), out, sx);
        for (int m = 1; m <= j; ++m) {
            semigroup_slice(op, spec, m * ht, f.slice(j - m), applied.data(), tmp);
            double w = (m == j) ? 0.5 * ht : ht;
            simd::axpy(w, applied.data(), out, sx);
        }
    }
    // semigroup of the initial datum
    for (int j = 0; j < spec.N_t; ++j) {
        semigroup_slice(op, spec, j * ht, g.data(), applied.data(), tmp);
        simd::axpy(1.0, applied.data(), v.slice(j), sx);
    }

    CauchyReport rep;
    rep.v = std::move(v);
    double trace = 0.0;
    for (std::size_t mm = 0; mm < sx; ++mm)
        trace = std::max(trace, std::abs(rep.v.at(1, mm) - g[mm]));
    rep.initial_trace_error = trace;
    rep.interior_residual_rel = residual_of(op, rep.v, f, rep.residual_mask);
    return rep;
}

}  // namespace parlab::riesz
