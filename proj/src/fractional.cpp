#include "parlab/fractional.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "parlab/kernels.hpp"
#include "parlab/periodic.hpp"
#include "parlab/quadrature.hpp"
#include "parlab/simd.hpp"
#include "parlab/special.hpp"

namespace parlab::fractional {

namespace {

// J_p(lambda, y) = INT_0^inf e^{-y^2/(4 tau)} e^{-lambda tau} tau^{-p} dtau,
// computed on the rotated ray tau = e^{-i arg(lambda)/2} v so both ends keep
// genuine exponential decay for every Re lambda >= 0, lambda != 0.
std::complex<double> subordination_J(std::complex<double> lambda, double y, double p) {
    double phi = std::arg(lambda);
    double alpha = 0.5 * phi;
    double ca = std::cos(alpha);
    std::complex<double> rot(std::cos(alpha), std::sin(alpha));        // e^{i alpha}
    std::complex<double> lam_rot = lambda * std::conj(rot);            // |lambda| e^{i phi/2}
    double y2 = 0.25 * y * y;

    // integration window in u = log v: both factors decayed below 1e-18
    double u_lo = std::log(y2 * ca / 45.0);
    double u_hi = std::log(45.0 / (std::abs(lambda) * ca)) + (p + 2.0) * 2.0;
    u_lo -= 4.0;
    u_hi += 4.0;

    auto g = [&](double u) -> std::complex<double> {
        double v = std::exp(u);
        std::complex<double> expo = -y2 / v * rot - lam_rot * v;
        return std::exp(expo + (1.0 - p) * u);
    };
    int m0 = std::max(2000, static_cast<int>((u_hi - u_lo) / 0.05));
    std::complex<double> J = quadrature::trapezoid_refine_complex(g, u_lo, u_hi, m0, 1e-13);
    // undo the rotation: dtau = e^{-i alpha} dv, tau^{-p} = e^{i alpha p} v^{-p}
    return J * std::pow(rot, p - 1.0);
}

std::complex<double> subordination_prefactor(double s, double y) {
    return std::exp(2.0 * s * std::log(y) - s * std::log(4.0) - std::lgamma(s));
}

void require_s(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional: s must be in (0,1)");
}

}  // namespace

std::complex<double> scalar_subordination(std::complex<double> lambda, double s, double y) {
    require_s(s);
    if (!(y > 0.0)) throw std::invalid_argument("scalar_subordination: y must be positive");
    if (lambda == std::complex<double>(0.0, 0.0)) return 1.0;  // unit mass
    if (lambda.real() < 0.0)
        throw std::invalid_argument("scalar_subordination: Re lambda must be >= 0");
    return subordination_prefactor(s, y) * subordination_J(lambda, y, 1.0 + s);
}

std::complex<double> scalar_subordination_dy(std::complex<double> lambda, double s, double y) {
    require_s(s);
    if (!(y > 0.0)) throw std::invalid_argument("scalar_subordination_dy: y must be positive");
    if (lambda.real() < 0.0)
        throw std::invalid_argument("scalar_subordination_dy: Re lambda must be >= 0");
    std::complex<double> sig = scalar_subordination(lambda, s, y);
    std::complex<double> J2 = subordination_J(lambda, y, 2.0 + s);
    return (2.0 * s / y) * sig - 0.5 * y * subordination_prefactor(s, y) * J2;
}

double poisson_total_mass(double s, double y) {
    require_s(s);
    // honest quadrature of the subordination density in u = log tau; the
    // x-integral of the (4.1) kernel is identically 1
    double y2 = 0.25 * y * y;
    double u_lo = std::log(y2 / 45.0) - 4.0;
    double u_hi = std::max(std::log(y2), 0.0) + 40.0 / s;  // tau^{-s} tail
    auto g = [&](double u) {
        double tau = std::exp(u);
        return std::exp(-y2 / tau - s * u);
    };
    double J = quadrature::trapezoid_refine(g, u_lo, u_hi, 4000, 1e-13);
    return std::exp(2.0 * s * std::log(y) - s * std::log(4.0) - std::lgamma(s)) * J;
}

double cs_reference(double s) {
    return std::tgamma(1.0 - s) * std::pow(4.0, 0.5 - s) / std::tgamma(s);
}

double fit_cs(double s) {
    require_s(s);
    // phi(y) = -y^{1-2s} d_y sigma(1, s, y) = c_s + C1 y^{2-2s} + C2 y^2 + O(y^{2+min(..)})
    const double ys[3] = {1e-2, 5e-3, 2.5e-3};
    double phi[3];
    for (int k = 0; k < 3; ++k) {
        double d = scalar_subordination_dy(1.0, s, ys[k]).real();
        phi[k] = -std::pow(ys[k], 1.0 - 2.0 * s) * d;
    }
    // solve [1, y^q, y^2] a = phi for a0 with q = 2-2s
    double q = 2.0 - 2.0 * s;
    double A[3][3];
    for (int k = 0; k < 3; ++k) {
        A[k][0] = 1.0;
        A[k][1] = std::pow(ys[k], q);
        A[k][2] = ys[k] * ys[k];
    }
    // Cramer
    auto det3 = [](const double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    double D = det3(A);
    double A0[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) A0[r][c] = (c == 0) ? phi[r] : A[r][c];
    return det3(A0) / D;
}

FracParams FracParams::make(double s, int k_levels) {
    require_s(s);
    FracParams p;
    p.s = s;
    p.c_s = fit_cs(s);
    for (int k = k_levels - 1; k >= 0; --k) p.y_grid.push_back(std::pow(2.0, -k));
    return p;
}

void FracParams::validate() const {
    require_s(s);
    if (!(c_s > 0.0)) throw std::invalid_argument("FracParams: c_s must be positive");
    if (y_grid.empty()) throw std::invalid_argument("FracParams: y_grid empty");
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
        if (!(y_grid[i] > 0.0)) throw std::invalid_argument("FracParams: heights must be positive");
        if (i > 0 && !(y_grid[i] > y_grid[i - 1]))
            throw std::invalid_argument("FracParams: y_grid must be strictly increasing");
    }
}

namespace {

// Exact subordination mass of the tau-interval (a, b]:
// P(s, y^2/(4a)) - P(s, y^2/(4b)).
struct CellMass {
    double s, y;
    double P_at(double tau) const {
        if (tau <= 0.0) return 1.0;
        return special::gamma_p(s, 0.25 * y * y / tau);
    }
    double mass(double a, double b) const { return P_at(a) - P_at(b); }
};

// log-spaced cut points between a and b (inclusive), count+1 cuts
std::vector<double> log_cuts(double a, double b, int count) {
    std::vector<double> cuts(count + 1);
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i <= count; ++i) cuts[i] = std::exp(la + (lb - la) * i / count);
    cuts.front() = a;
    cuts.back() = b;
    return cuts;
}

// Gaussian lattice row over the reduced axis (periodic images summed),
// normalized to unit sum. Positive.
std::vector<double> heat_axis_row(double tau, double hx, int Mx) {
    double period = hx * Mx;
    double radius = kernels::gaussian_tail_radius(tau) + period;
    int kmax = static_cast<int>(std::ceil(radius / period));
    std::vector<double> expo(Mx);
    std::vector<double> row(Mx, 0.0);
    for (int k = -kmax; k <= kmax; ++k) {
        bool any = false;
        for (int o = 0; o < Mx; ++o) {
            double z = o * hx - k * period;
            double e = -z * z / (4.0 * tau);
            expo[o] = e;
            any = any || e > -745.0;
        }
        if (!any) continue;
        std::vector<double> vals(Mx);
        simd::vexp(expo.data(), vals.data(), Mx);
        for (int o = 0; o < Mx; ++o) row[o] += vals[o];
    }
    double total = simd::sum(row.data(), Mx);
    for (double& w : row) w /= total;
    return row;
}

// One-dimensional Mehler matrix on the closed node set with trapezoid
// weights, row-clamped to unit mass so the discrete operator stays a
// sup-contraction.
std::vector<double> mehler_axis_matrix(double tau, const GridSpec& spec) {
    int N = spec.N_x;
    double hx = spec.h_x();
    std::vector<double> M(static_cast<std::size_t>(N) * N);
    // log-space assembly (log sinh 2tau = 2tau + log1p(-e^{-4tau}) - log 2),
    // exponents gathered then one vexp sweep
    double log_s1 = -0.5 * (std::log(2.0 * M_PI) + special::log_sinh(2.0 * tau));
    double coth = 1.0 + 2.0 / std::expm1(2.0 * tau);
    double tnh = std::tanh(tau);
    std::vector<double> expo(static_cast<std::size_t>(N) * N);
    for (int a = 0; a < N; ++a) {
        double xa = spec.x_node(a);
        for (int b = 0; b < N; ++b) {
            double xb = spec.x_node(b);
            double u = xa - xb, v = xa + xb;
            expo[static_cast<std::size_t>(a) * N + b] =
                log_s1 - 0.25 * u * u * coth - 0.25 * v * v * tnh;
        }
    }
    simd::vexp(expo.data(), M.data(), expo.size());
    for (int a = 0; a < N; ++a) {
        double* row = M.data() + static_cast<std::size_t>(a) * N;
        row[0] *= 0.5;
        row[N - 1] *= 0.5;
        for (int b = 0; b < N; ++b) row[b] *= hx;
        double total = simd::sum(row, N);
        if (total > 1.0) {
            for (int b = 0; b < N; ++b) row[b] /= total;
        }
    }
    return M;
}

struct PoissonPlan {
    double tau0;        // below: identity in space
    double tau_lat;     // lattice/matrix region upper end
    double tau_huge;    // mean region upper end (heat only)
};

GridFunction poisson_impl(Evolution op, const GridFunction& u, double y, double s) {
    if (!(y > 0.0)) throw std::invalid_argument("poisson: y must be positive");
    require_s(s);
    const GridSpec& spec = u.spec;
    spec.validate();
    const bool heat = (op == Evolution::heat);
    periodic::Buffer in = periodic::to_periodic(u, /*reduce_space=*/heat);
    periodic::Buffer out = periodic::like(in);
    const double hx = spec.h_x();
    const double T = spec.t_max - spec.t_min;
    const int n = spec.n;

    CellMass cm{s, y};
    PoissonPlan plan;
    // mass-normalized kernel rows stay accurate (and contractive) down to
    // arbitrarily small tau, so the identity region only needs to absorb
    // the range where even the subordination time shift is negligible
    plan.tau0 = std::max(1e-12, 1e-5 * y * y);
    plan.tau_lat = heat ? 2.0 * spec.L * spec.L : 40.0 / n;
    plan.tau_huge = std::max({200.0 * T, 100.0 * y * y, 50.0 * spec.L * spec.L});
    double mass_skip = 1e-16;

    std::vector<double> shifted(in.rsx), work(in.rsx);

    // --- identity region (0, tau0]: e^{-tau L} ~ id in space ---
    {
        double lo = std::max(std::min(0.25 * y * y * 1e-4, plan.tau0 * 0.5), 1e-300);
        double head = cm.mass(0.0, lo);
        // head shift is <= lo in time: treat as unshifted
        if (head > 0.0) {
            for (int j = 0; j < in.Mt; ++j)
                simd::axpy(head, in.slice(j), out.slice(j), in.rsx);
        }
        auto cuts = log_cuts(lo, plan.tau0, 120);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double mass = cm.mass(cuts[c], cuts[c + 1]);
            if (mass < mass_skip) continue;
            double tau = std::sqrt(cuts[c] * cuts[c + 1]);
            for (int j = 0; j < in.Mt; ++j) {
                periodic::linear_slice(in, spec.t_node(j) - tau, shifted.data());
                simd::axpy(mass, shifted.data(), out.slice(j), in.rsx);
            }
        }
    }

    // --- resolved region (tau0, tau_lat]: spatial semigroup applied ---
    {
        double decades = std::log10(plan.tau_lat / plan.tau0);
        int cells = std::max(heat ? 280 : 420, static_cast<int>(26.0 * decades));
        auto cuts = log_cuts(plan.tau0, plan.tau_lat, cells);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double mass = cm.mass(cuts[c], cuts[c + 1]);
            if (mass < mass_skip) continue;
            double tau = std::sqrt(cuts[c] * cuts[c + 1]);
            std::vector<double> row;
            std::vector<double> mat;
            if (heat) {
                row = heat_axis_row(tau, hx, in.Mx);
            } else {
                mat = mehler_axis_matrix(tau, spec);
            }
            for (int j = 0; j < in.Mt; ++j) {
                periodic::linear_slice(in, spec.t_node(j) - tau, shifted.data());
                // apply the spatial semigroup axis by axis
                const double* src = shifted.data();
                for (int ax = 0; ax < n; ++ax) {
                    std::fill(work.begin(), work.end(), 0.0);
                    if (heat) {
                        periodic::axis_correlate_add(src, work.data(), row, ax, n, in.Mx, 1.0);
                    } else {
                        periodic::axis_matrix_add(src, work.data(), mat, ax, n, in.Mx, 1.0);
                    }
                    std::copy(work.begin(), work.end(), shifted.begin());
                    src = shifted.data();
                }
                simd::axpy(mass, shifted.data(), out.slice(j), in.rsx);
            }
        }
    }

    if (heat) {
        // --- diffused region (tau_lat, tau_huge]: slices are spatially flat ---
        std::vector<double> meanx(in.Mt);
        for (int j = 0; j < in.Mt; ++j) meanx[j] = simd::sum(in.slice(j), in.rsx) / in.rsx;
        auto mean_at = [&](double tt) {
            double theta = (tt - spec.t_min) / T * in.Mt;
            theta -= std::floor(theta / in.Mt) * in.Mt;
            int i0 = static_cast<int>(std::floor(theta)) % in.Mt;
            double fr = theta - std::floor(theta);
            return (1.0 - fr) * meanx[i0] + fr * meanx[(i0 + 1) % in.Mt];
        };
        auto cuts = log_cuts(plan.tau_lat, plan.tau_huge, 600);
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double mass = cm.mass(cuts[c], cuts[c + 1]);
            if (mass < mass_skip) continue;
            double tau = std::sqrt(cuts[c] * cuts[c + 1]);
            for (int j = 0; j < in.Mt; ++j) {
                double v = mass * mean_at(spec.t_node(j) - tau);
                double* os = out.slice(j);
                for (std::size_t m = 0; m < in.rsx; ++m) os[m] += v;
            }
        }
        // --- tail closure: remaining mass times the global mean ---
        double tail = cm.P_at(plan.tau_huge);
        double gmean = simd::sum(meanx.data(), in.Mt) / in.Mt;
        if (tail > 0.0) {
            double v = tail * gmean;
            for (int j = 0; j < in.Mt; ++j) {
                double* os = out.slice(j);
                for (std::size_t m = 0; m < in.rsx; ++m) os[m] += v;
            }
        }
    }
    // oscillator: the Mehler mass e^{-n tau} has already decayed below
    // 1e-17 at tau_lat; the remaining subordination mass contributes 0.

    return periodic::to_grid(out);
}

}  // namespace

GridFunction poisson_heat(const GridFunction& u, double y, double s) {
    return poisson_impl(Evolution::heat, u, y, s);
}

GridFunction poisson_hermite(const GridFunction& u, double y, double s) {
    return poisson_impl(Evolution::hermite, u, y, s);
}

GridFunction poisson_apply(Evolution op, const GridFunction& u, double y, double s) {
    return poisson_impl(op, u, y, s);
}

GridFunction maximal_poisson(Evolution op, const GridFunction& u, double s,
                             const std::vector<double>& y_grid) {
    if (y_grid.empty()) throw std::invalid_argument("maximal_poisson: empty y grid");
    GridFunction out = zeros(u.spec);
    for (double y : y_grid) {
        GridFunction p = poisson_impl(op, u, y, s);
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = std::max(out.values[i], std::abs(p.values[i]));
    }
    return out;
}

ExtensionField build_extension(Evolution op, const GridFunction& u, double s,
                               const std::vector<double>& y_grid) {
    ExtensionField E;
    E.base = u.spec;
    E.s = s;
    E.y_grid = y_grid;
    for (double y : y_grid) E.levels.push_back(poisson_impl(op, u, y, s));
    return E;
}

NeumannResult neumann_limit(Evolution op, const GridFunction& u, double s,
                            const std::vector<double>& y_schedule) {
    require_s(s);
    if (y_schedule.size() < 5)
        throw std::invalid_argument("neumann_limit: need at least 5 heights");
    for (std::size_t i = 1; i < y_schedule.size(); ++i)
        if (!(y_schedule[i] < y_schedule[i - 1]))
            throw std::invalid_argument("neumann_limit: schedule must be decreasing");

    const std::size_t K = y_schedule.size();
    std::vector<GridFunction> U;
    U.reserve(K);
    for (double y : y_schedule) U.push_back(poisson_impl(op, u, y, s));

    // phi_k = -y_k^{1-2s} dU/dy at y_k, three-point stencil toward y -> 0
    auto stencil = [](double a, double b, double c, int which) {
        // derivative weights of the quadratic through (a,b,c) at point [which]
        double pa = which == 0 ? a : (which == 1 ? b : c);
        double wa = (2.0 * pa - b - c) / ((a - b) * (a - c));
        double wb = (2.0 * pa - a - c) / ((b - a) * (b - c));
        double wc = (2.0 * pa - a - b) / ((c - a) * (c - b));
        return std::array<double, 3>{wa, wb, wc};
    };

    std::vector<GridFunction> phi;
    for (std::size_t k = 0; k + 2 < K; ++k) {
        auto w = stencil(y_schedule[k], y_schedule[k + 1], y_schedule[k + 2], 0);
        GridFunction p = zeros(u.spec);
        double f = -std::pow(y_schedule[k], 1.0 - 2.0 * s);
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            p.values[i] = f * (w[0] * U[k].values[i] + w[1] * U[k + 1].values[i] +
                               w[2] * U[k + 2].values[i]);
        }
        phi.push_back(std::move(p));
    }

    // extrapolate the last three phi's with exponents {0, 2-2s, 2}
    const std::size_t P = phi.size();
    double ys[3] = {y_schedule[P - 3], y_schedule[P - 2], y_schedule[P - 1]};
    double q = 2.0 - 2.0 * s;
    double A[3][3];
    for (int r = 0; r < 3; ++r) {
        A[r][0] = 1.0;
        A[r][1] = std::pow(ys[r], q);
        A[r][2] = ys[r] * ys[r];
    }
    auto det3 = [](const double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    double D = det3(A);
    // first-column Cramer weights: a0 = sum_r w_r phi_r
    double w0[3];
    for (int r = 0; r < 3; ++r) {
        double M[3][3];
        for (int rr = 0; rr < 3; ++rr)
            for (int cc = 0; cc < 3; ++cc) M[rr][cc] = A[rr][cc];
        // replace column 0 with unit vector e_r and expand
        for (int rr = 0; rr < 3; ++rr) M[rr][0] = (rr == r) ? 1.0 : 0.0;
        w0[r] = det3(M) / D;
    }

    NeumannResult res{zeros(u.spec), 0.0};
    for (std::size_t i = 0; i < res.values.values.size(); ++i) {
        res.values.values[i] = w0[0] * phi[P - 3].values[i] + w0[1] * phi[P - 2].values[i] +
                               w0[2] * phi[P - 1].values[i];
    }

    // empirical order from the largest-magnitude node of the final phi
    std::size_t imax = 0;
    double vmax = 0.0;
    for (std::size_t i = 0; i < phi[P - 1].values.size(); ++i) {
        if (std::abs(phi[P - 1].values[i]) > vmax) {
            vmax = std::abs(phi[P - 1].values[i]);
            imax = i;
        }
    }
    if (P >= 3 && vmax > 0.0) {
        double d1 = phi[P - 3].values[imax] - phi[P - 2].values[imax];
        double d2 = phi[P - 2].values[imax] - phi[P - 1].values[imax];
        double ratio = (y_schedule[P - 3] / y_schedule[P - 2]);
        if (d2 != 0.0 && d1 / d2 > 0.0) res.order_estimate = std::log(d1 / d2) / std::log(ratio);
    }
    return res;
}

ResidualReport extension_residual(const ExtensionField& E, Evolution op) {
    const GridSpec& spec = E.base;
    const double s = E.s;
    const std::size_t K = E.y_grid.size();
    if (K < 3) throw std::invalid_argument("extension_residual: need at least 3 y levels");
    const std::size_t sx = spec.spatial_size();
    const double ht = spec.h_t(), hx = spec.h_x();

    quadrature::Accumulator res2_minus, res2_plus, scale_t, scale_div, scale_lap;
    std::size_t count = 0;
    std::vector<int> m(spec.n);

    for (std::size_t k = 1; k + 1 < K; ++k) {
        double yk = E.y_grid[k];
        double ym = E.y_grid[k - 1], yp = E.y_grid[k + 1];
        double wk = std::pow(yk, 1.0 - 2.0 * s);
        double wp_mid = std::pow(0.5 * (yk + yp), 1.0 - 2.0 * s);
        double wm_mid = std::pow(0.5 * (yk + ym), 1.0 - 2.0 * s);
        const GridFunction& Um = E.levels[k - 1];
        const GridFunction& Uk = E.levels[k];
        const GridFunction& Up = E.levels[k + 1];

        for (int j = 1; j < spec.N_t - 1; ++j) {
            for (std::size_t mm = 0; mm < sx; ++mm) {
                spec.spatial_coords(mm, m);
                bool interior = true;
                for (int d = 0; d < spec.n; ++d)
                    interior = interior && m[d] > 0 && m[d] < spec.N_x - 1;
                if (!interior) continue;

                double ut = (Uk.at(j + 1, mm) - Uk.at(j - 1, mm)) / (2.0 * ht);
                double lap = 0.0;
                for (int d = 0; d < spec.n; ++d) {
                    std::size_t up = mm, dn = mm;
                    std::size_t stride = 1;
                    for (int dd = d + 1; dd < spec.n; ++dd) stride *= spec.N_x;
                    up += stride;
                    dn -= stride;
                    lap += (Uk.at(j, up) - 2.0 * Uk.at(j, mm) + Uk.at(j, dn)) / (hx * hx);
                }
                // conservative flux differencing of y^{1-2s} U_y
                double flux_p = wp_mid * (Up.at(j, mm) - Uk.at(j, mm)) / (yp - yk);
                double flux_m = wm_mid * (Uk.at(j, mm) - Um.at(j, mm)) / (yk - ym);
                double divy = (flux_p - flux_m) / (wk * 0.5 * (yp - ym));

                double x2 = 0.0;
                if (op == Evolution::hermite) {
                    for (int d = 0; d < spec.n; ++d) {
                        double xd = spec.x_node(m[d]);
                        x2 += xd * xd;
                    }
                }
                double r_minus = ut - lap - divy + x2 * Uk.at(j, mm);
                double r_plus = ut - lap - divy - x2 * Uk.at(j, mm);
                res2_minus.add(r_minus * r_minus);
                res2_plus.add(r_plus * r_plus);
                scale_t.add(ut * ut);
                scale_div.add(divy * divy);
                scale_lap.add(lap * lap);
                ++count;
            }
        }
    }
    ResidualReport rep;
    rep.interior_nodes = count;
    rep.scale = std::sqrt(std::max({scale_t.value(), scale_div.value(), scale_lap.value()}));
    if (rep.scale == 0.0) rep.scale = 1.0;
    rep.rel_residual = std::sqrt(res2_minus.value()) / rep.scale;
    rep.rel_residual_plus = std::sqrt(res2_plus.value()) / rep.scale;
    return rep;
}

}  // namespace parlab::fractional
