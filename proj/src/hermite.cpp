#include "parlab/hermite.hpp"

#include <cmath>
#include <stdexcept>

#include "parlab/quadrature.hpp"

namespace parlab::hermite {

double eval_hermite(int k, double r) {
    if (k < 0) throw std::invalid_argument("eval_hermite: k must be >= 0");
    double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * r * r);
    if (k == 0) return h0;
    double h1 = std::sqrt(2.0) * r * h0;
    if (k == 1) return h1;
    double hm = h0, h = h1;
    for (int m = 1; m < k; ++m) {
        double hp = r * std::sqrt(2.0 / (m + 1.0)) * h - std::sqrt(m / (m + 1.0)) * hm;
        hm = h;
        h = hp;
    }
    return h;
}

std::vector<double> eval_hermite_all(int J, double r) {
    std::vector<double> out(J + 1);
    out[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * r * r);
    if (J == 0) return out;
    out[1] = std::sqrt(2.0) * r * out[0];
    for (int m = 1; m < J; ++m) {
        out[m + 1] = r * std::sqrt(2.0 / (m + 1.0)) * out[m] - std::sqrt(m / (m + 1.0)) * out[m - 1];
    }
    return out;
}

double eval_multi(const MultiIndex& alpha, std::span<const double> x) {
    double p = 1.0;
    for (std::size_t d = 0; d < x.size(); ++d) p *= eval_hermite(alpha.a[d], x[d]);
    return p;
}

namespace {
void enumerate(int n, int J, int d, int remaining, std::vector<int>& cur,
               std::vector<MultiIndex>& out) {
    if (d == n) {
        out.push_back(MultiIndex{cur});
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        cur[d] = k;
        enumerate(n, J, d + 1, remaining - k, cur, out);
    }
}
}  // namespace

Basis Basis::make(int n, int J) {
    Basis b;
    b.n = n;
    b.J = J;
    std::vector<int> cur(n, 0);
    enumerate(n, J, 0, J, cur, b.indices);
    return b;
}

std::size_t Basis::find(std::span<const int> alpha) const {
    for (std::size_t i = 0; i < indices.size(); ++i) {
        bool eq = true;
        for (int d = 0; d < n; ++d) eq = eq && indices[i].a[d] == alpha[d];
        if (eq) return i;
    }
    return static_cast<std::size_t>(-1);
}

int default_degree(int n) { return n == 3 ? 12 : 20; }

double recommended_halfwidth(int n, int J) { return std::sqrt(2.0 * J + n) + 6.0; }

Expansion project(const std::function<double(std::span<const double>)>& f, int n, int J,
                  double halfwidth, int points_per_unit) {
    double rec = recommended_halfwidth(n, J);
    bool warn = false;
    if (halfwidth <= 0.0) {
        halfwidth = rec;
    } else if (halfwidth < rec) {
        warn = true;
    }
    int m = static_cast<int>(std::ceil(2.0 * halfwidth * points_per_unit)) | 1;  // odd
    if (m < 11) m = 11;
    double h = 2.0 * halfwidth / (m - 1);

    Expansion e;
    e.basis = Basis::make(n, J);
    e.c.assign(e.basis.size(), 0.0);
    e.box_warning = warn;

    // cached 1-D tables: tab[i][k] = h_k(x_i), trapezoid weights on the axis
    std::vector<std::vector<double>> tab(m);
    std::vector<double> nodes(m), wts(m, 1.0);
    for (int i = 0; i < m; ++i) {
        nodes[i] = -halfwidth + i * h;
        tab[i] = eval_hermite_all(J, nodes[i]);
    }
    wts.front() = wts.back() = 0.5;

    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    std::vector<quadrature::Accumulator> acc(e.basis.size());
    const double cell = std::pow(h, n);
    for (;;) {
        double w = 1.0;
        for (int d = 0; d < n; ++d) {
            x[d] = nodes[idx[d]];
            w *= wts[idx[d]];
        }
        double fv = f(x);
        if (fv != 0.0) {
            for (std::size_t a = 0; a < e.basis.size(); ++a) {
                double ha = 1.0;
                for (int d = 0; d < n; ++d) ha *= tab[idx[d]][e.basis.indices[a].a[d]];
                acc[a].add(w * fv * ha);
            }
        }
        int d = n - 1;
        while (d >= 0 && ++idx[d] == m) idx[d--] = 0;
        if (d < 0) break;
    }
    for (std::size_t a = 0; a < e.basis.size(); ++a) e.c[a] = acc[a].value() * cell;
    return e;
}

double synthesize(const Expansion& e, std::span<const double> x) {
    // cached per-axis tables up to J
    std::vector<std::vector<double>> tab(e.basis.n);
    for (int d = 0; d < e.basis.n; ++d) tab[d] = eval_hermite_all(e.basis.J, x[d]);
    double s = 0.0;
    for (std::size_t a = 0; a < e.basis.size(); ++a) {
        if (e.c[a] == 0.0) continue;
        double ha = 1.0;
        for (int d = 0; d < e.basis.n; ++d) ha *= tab[d][e.basis.indices[a].a[d]];
        s += e.c[a] * ha;
    }
    return s;
}

Expansion semigroup_spectral(const Expansion& e, double tau) {
    if (tau < 0.0) throw std::invalid_argument("semigroup_spectral: tau must be >= 0");
    Expansion out = e;
    for (std::size_t a = 0; a < out.basis.size(); ++a) {
        out.c[a] *= std::exp(-tau * out.basis.eigenvalue(a));
    }
    return out;
}

std::complex<double> time_symbol(TimeMultiplier kind, double rho, int eigenvalue) {
    std::complex<double> denom(eigenvalue, rho);  // i rho + m
    switch (kind) {
        case TimeMultiplier::inverse:
            return 1.0 / denom;
        case TimeMultiplier::riesz_t:
            return std::complex<double>(0.0, rho) / denom;
        case TimeMultiplier::riesz_H:
            return static_cast<double>(eigenvalue) / denom;
    }
    return {};
}

TimeExpansion time_multiplier(const TimeExpansion& e, TimeMultiplier kind) {
    TimeExpansion out = e;
    const std::size_t na = e.basis.size();
    for (int k = 0; k < e.n_freq; ++k) {
        double rho = e.rho(k);
        for (std::size_t a = 0; a < na; ++a) {
            out.c[k * na + a] *= time_symbol(kind, rho, e.basis.eigenvalue(a));
        }
    }
    return out;
}

namespace {

// shared ladder: out_beta = sqrt((beta_i+1)/2) c_{beta+e_i} + sign * sqrt(beta_i/2) c_{beta-e_i}
// sign = -1 for d/dx_i, +1 for multiplication by x_i
template <typename T>
std::vector<T> ladder_apply(const Basis& in_b, const std::vector<T>& cin, const Basis& out_b,
                            int axis, double sign, std::size_t blocks) {
    std::vector<T> cout(out_b.size() * blocks, T{});
    std::vector<int> alpha(in_b.n);
    const std::size_t na_in = in_b.size();
    const std::size_t na_out = out_b.size();
    for (std::size_t bidx = 0; bidx < out_b.size(); ++bidx) {
        alpha = out_b.indices[bidx].a;
        // + e_i neighbor
        alpha[axis] += 1;
        std::size_t up = in_b.find(alpha);
        alpha[axis] -= 1;
        double beta_i = alpha[axis];
        std::size_t down = static_cast<std::size_t>(-1);
        if (beta_i >= 1) {
            alpha[axis] -= 1;
            down = in_b.find(alpha);
            alpha[axis] += 1;
        }
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            T v{};
            if (up != static_cast<std::size_t>(-1))
                v += std::sqrt((beta_i + 1.0) / 2.0) * cin[blk * na_in + up];
            if (down != static_cast<std::size_t>(-1))
                v += sign * std::sqrt(beta_i / 2.0) * cin[blk * na_in + down];
            cout[blk * na_out + bidx] = v;
        }
    }
    return cout;
}

}  // namespace

Expansion differentiate(const Expansion& e, int axis) {
    Expansion out;
    out.basis = Basis::make(e.basis.n, e.basis.J + 1);
    out.c = ladder_apply(e.basis, e.c, out.basis, axis, -1.0, 1);
    return out;
}

Expansion multiply_coordinate(const Expansion& e, int axis) {
    Expansion out;
    out.basis = Basis::make(e.basis.n, e.basis.J + 1);
    out.c = ladder_apply(e.basis, e.c, out.basis, axis, +1.0, 1);
    return out;
}

TimeExpansion differentiate(const TimeExpansion& e, int axis) {
    TimeExpansion out;
    out.basis = Basis::make(e.basis.n, e.basis.J + 1);
    out.n_freq = e.n_freq;
    out.period = e.period;
    out.c = ladder_apply(e.basis, e.c, out.basis, axis, -1.0, e.n_freq);
    return out;
}

TimeExpansion multiply_coordinate(const TimeExpansion& e, int axis) {
    TimeExpansion out;
    out.basis = Basis::make(e.basis.n, e.basis.J + 1);
    out.n_freq = e.n_freq;
    out.period = e.period;
    out.c = ladder_apply(e.basis, e.c, out.basis, axis, +1.0, e.n_freq);
    return out;
}

TimeExpansion analyze(const GridFunction& f, int J) {
    const GridSpec& spec = f.spec;
    spec.validate();
    const int Mt = spec.N_t - 1;  // periodic representative
    const std::size_t sx = spec.spatial_size();

    TimeExpansion e;
    e.basis = Basis::make(spec.n, J);
    e.n_freq = Mt;
    e.period = spec.t_max - spec.t_min;
    const std::size_t na = e.basis.size();
    e.c.assign(static_cast<std::size_t>(Mt) * na, {});

    // spatial projection tables on the grid's own nodes (trapezoid weights)
    std::vector<std::vector<double>> tab(spec.N_x);
    for (int m = 0; m < spec.N_x; ++m) tab[m] = eval_hermite_all(J, spec.x_node(m));
    std::vector<double> wts(spec.N_x, 1.0);
    wts.front() = wts.back() = 0.5;
    const double cell = std::pow(spec.h_x(), spec.n);

    // per-slice coefficients c_alpha(t_j)
    std::vector<double> slice_c(static_cast<std::size_t>(Mt) * na, 0.0);
    std::vector<int> m(spec.n);
    for (int jt = 0; jt < Mt; ++jt) {
        const double* fs = f.slice(jt);
        std::vector<quadrature::Accumulator> acc(na);
        for (std::size_t mm = 0; mm < sx; ++mm) {
            if (fs[mm] == 0.0) continue;
            spec.spatial_coords(mm, m);
            double w = 1.0;
            for (int d = 0; d < spec.n; ++d) w *= wts[m[d]];
            for (std::size_t a = 0; a < na; ++a) {
                double ha = 1.0;
                for (int d = 0; d < spec.n; ++d) ha *= tab[m[d]][e.basis.indices[a].a[d]];
                acc[a].add(w * fs[mm] * ha);
            }
        }
        for (std::size_t a = 0; a < na; ++a) slice_c[jt * na + a] = acc[a].value() * cell;
    }

    // DFT over time: c_alpha(rho_k) = (1/Mt) sum_j c_alpha(t_j) e^{-i 2 pi k j / Mt}
    for (int k = 0; k < Mt; ++k) {
        for (std::size_t a = 0; a < na; ++a) {
            std::complex<double> s{};
            for (int jt = 0; jt < Mt; ++jt) {
                double phase = -2.0 * M_PI * k * jt / Mt;
                s += slice_c[jt * na + a] * std::complex<double>(std::cos(phase), std::sin(phase));
            }
            e.c[static_cast<std::size_t>(k) * na + a] = s / static_cast<double>(Mt);
        }
    }
    return e;
}

GridFunction synthesize_grid(const TimeExpansion& e, const GridSpec& spec) {
    spec.validate();
    if (spec.N_t - 1 != e.n_freq)
        throw std::invalid_argument("synthesize_grid: frequency count does not match grid");
    const std::size_t sx = spec.spatial_size();
    const std::size_t na = e.basis.size();
    const int Mt = e.n_freq;

    // inverse DFT to per-slice coefficients
    std::vector<double> slice_c(static_cast<std::size_t>(Mt) * na, 0.0);
    for (int jt = 0; jt < Mt; ++jt) {
        for (std::size_t a = 0; a < na; ++a) {
            std::complex<double> s{};
            for (int k = 0; k < Mt; ++k) {
                double phase = 2.0 * M_PI * k * jt / Mt;
                s += e.c[static_cast<std::size_t>(k) * na + a] *
                     std::complex<double>(std::cos(phase), std::sin(phase));
            }
            slice_c[jt * na + a] = s.real();
        }
    }

    std::vector<std::vector<double>> tab(spec.N_x);
    for (int m = 0; m < spec.N_x; ++m) tab[m] = eval_hermite_all(e.basis.J, spec.x_node(m));

    GridFunction out = zeros(spec);
    std::vector<int> m(spec.n);
    for (int jt = 0; jt < spec.N_t; ++jt) {
        int jp = jt % Mt;  // periodic closure of the duplicated end node
        double* os = out.slice(jt);
        for (std::size_t mm = 0; mm < sx; ++mm) {
            spec.spatial_coords(mm, m);
            double s = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                double c = slice_c[jp * na + a];
                if (c == 0.0) continue;
                double ha = 1.0;
                for (int d = 0; d < spec.n; ++d) ha *= tab[m[d]][e.basis.indices[a].a[d]];
                s += c * ha;
            }
            os[mm] = s;
        }
    }
    return out;
}

}  // namespace parlab::hermite
