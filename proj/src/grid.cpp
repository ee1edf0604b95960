#include "parlab/grid.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "parlab/quadrature.hpp"

namespace parlab {

void GridSpec::validate() const {
    std::ostringstream err;
    if (n < 1 || n > 3)
        err << "spatial dimension n must be in [1,3], got " << n;
    else if (N_x < 3)
        err << "N_x must be >= 3, got " << N_x;
    else if (N_x % 2 == 0)
        err << "N_x must be odd (the origin must be a node), got " << N_x;
    else if (N_t < 3)
        err << "N_t must be >= 3, got " << N_t;
    else if (!(L > 0.0))
        err << "L must be positive, got " << L;
    else if (!(t_max > t_min))
        err << "t_max must exceed t_min, got [" << t_min << ", " << t_max << "]";
    else
        return;
    throw std::invalid_argument("GridSpec: " + err.str());
}

std::size_t GridSpec::spatial_size() const {
    std::size_t s = 1;
    for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N_x);
    return s;
}

std::size_t GridSpec::total_size() const { return spatial_size() * N_t; }

std::size_t GridSpec::spatial_index(std::span<const int> m) const {
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) idx = idx * N_x + m[d];
    return idx;
}

void GridSpec::spatial_coords(std::size_t flat, std::span<int> m) const {
    for (int d = n - 1; d >= 0; --d) {
        m[d] = static_cast<int>(flat % N_x);
        flat /= N_x;
    }
}

Grid build_grid(const GridSpec& spec) {
    spec.validate();
    Grid g{spec, {}, {}};
    g.t_nodes.resize(spec.N_t);
    for (int j = 0; j < spec.N_t; ++j) g.t_nodes[j] = spec.t_node(j);
    g.x_nodes.resize(spec.N_x);
    for (int m = 0; m < spec.N_x; ++m) g.x_nodes[m] = spec.x_node(m);
    return g;
}

GridFunction zeros(const GridSpec& spec) {
    spec.validate();
    return GridFunction{spec, std::vector<double>(spec.total_size(), 0.0)};
}

GridFunction sample(const FieldDescriptor& fdesc, const GridSpec& spec) {
    spec.validate();
    GridFunction out = zeros(spec);
    std::vector<double> x(spec.n);
    std::vector<int> m(spec.n);
    const std::size_t sx = spec.spatial_size();
    for (int j = 0; j < spec.N_t; ++j) {
        double t = spec.t_node(j);
        for (std::size_t f = 0; f < sx; ++f) {
            spec.spatial_coords(f, m);
            for (int d = 0; d < spec.n; ++d) x[d] = spec.x_node(m[d]);
            double v = fdesc.f(t, x);
            if (!std::isfinite(v)) {
                std::ostringstream err;
                err << "sample(" << fdesc.name << "): non-finite value at node t=" << t << ", x=(";
                for (int d = 0; d < spec.n; ++d) err << (d ? "," : "") << x[d];
                err << ")";
                throw std::runtime_error(err.str());
            }
            out.at(j, f) = v;
        }
    }
    return out;
}

double bump(double r) {
    double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

FieldDescriptor random_family_descriptor(const GridSpec& spec, std::uint64_t seed,
                                         const RandomFamilyParams& params) {
    spec.validate();
    std::mt19937_64 rng(seed);
    auto unit_double = [&rng]() {
        // uniform in [-1, 1]; explicit mapping keeps the family identical
        // across standard library implementations
        return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    };
    auto wavenumber = [&](int cap) {
        return static_cast<int>(rng() % static_cast<std::uint64_t>(2 * cap + 1)) - cap;
    };

    struct Mode {
        double amp;
        double phase;
        double rho;
        std::vector<double> xi;
    };
    std::vector<Mode> modes;
    double T = spec.t_max - spec.t_min;
    int cap_t = params.max_wavenumber_t >= 0 ? params.max_wavenumber_t : params.max_wavenumber;
    auto draw = [&](int cap, bool nonzero) {
        int k = wavenumber(cap);
        if (nonzero && cap >= 1) {
            while (k == 0) k = wavenumber(cap);
        }
        return k;
    };
    for (int k = 0; k < params.mode_count; ++k) {
        Mode mo;
        int kt = draw(cap_t, params.nondegenerate_modes);
        mo.rho = 2.0 * M_PI * kt / T;
        bool all_zero = (kt == 0);
        mo.xi.resize(spec.n);
        for (int d = 0; d < spec.n; ++d) {
            int kx = draw(params.max_wavenumber, params.nondegenerate_modes);
            mo.xi[d] = M_PI * kx / spec.L;
            all_zero = all_zero && (kx == 0);
        }
        mo.amp = unit_double();
        mo.phase = M_PI * unit_double();
        if (all_zero) mo.xi[0] = M_PI / spec.L;  // keep every mode non-constant
        modes.push_back(std::move(mo));
    }

    double t_c = 0.5 * (spec.t_min + spec.t_max);
    double t_half = 0.5 * T * params.support_fraction;
    double x_half = spec.L * params.support_fraction;

    FieldDescriptor d;
    d.name = "random_trig_bump(seed=" + std::to_string(seed) + ")";
    d.f = [modes, t_c, t_half, x_half](double t, std::span<const double> x) {
        double b = bump((t - t_c) / t_half);
        if (b == 0.0) return 0.0;
        for (double xi : x) {
            b *= bump(xi / x_half);
            if (b == 0.0) return 0.0;
        }
        double s = 0.0;
        for (const auto& mo : modes) {
            double theta = mo.rho * t + mo.phase;
            for (std::size_t dd = 0; dd < x.size(); ++dd) theta += mo.xi[dd] * x[dd];
            s += mo.amp * std::cos(theta);
        }
        return b * s;
    };
    return d;
}

double periodic_mean(const GridFunction& f) {
    const GridSpec& spec = f.spec;
    const int Mt = spec.N_t - 1, Mx = spec.N_x - 1;
    quadrature::Accumulator acc;
    std::vector<int> m(spec.n);
    std::size_t count = 0;
    for (int j = 0; j < Mt; ++j) {
        for (std::size_t mm = 0; mm < spec.spatial_size(); ++mm) {
            spec.spatial_coords(mm, m);
            bool reduced = true;
            for (int d = 0; d < spec.n; ++d) reduced = reduced && m[d] < Mx;
            if (!reduced) continue;
            acc.add(f.at(j, mm));
            ++count;
        }
    }
    return acc.value() / count;
}

GridFunction mean_free_family_field(const GridSpec& spec, std::uint64_t seed,
                                    const RandomFamilyParams& params) {
    GridFunction f = sample(random_family_descriptor(spec, seed, params), spec);
    double t_c = 0.5 * (spec.t_min + spec.t_max);
    double t_half = 0.5 * (spec.t_max - spec.t_min) * params.support_fraction;
    double x_half = spec.L * params.support_fraction;
    FieldDescriptor g{"bump", [=](double t, std::span<const double> x) {
                          double b = bump((t - t_c) / t_half);
                          for (double xi : x) b *= bump(xi / x_half);
                          return b;
                      }};
    GridFunction gf = sample(g, spec);
    double c = periodic_mean(f) / periodic_mean(gf);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] -= c * gf.values[i];
    return f;
}

namespace {

// trapezoid weight along one axis of length N
inline double axis_weight(int i, int N) { return (i == 0 || i == N - 1) ? 0.5 : 1.0; }

double spatial_trap_weight(const GridSpec& spec, std::span<const int> m) {
    double w = 1.0;
    for (int d = 0; d < spec.n; ++d) w *= axis_weight(m[d], spec.N_x);
    return w;
}

}  // namespace

double lp_norm(const GridFunction& f, double p, const WeightSpec& w, const Mask& mask) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const GridSpec& spec = f.spec;
    const std::size_t sx = spec.spatial_size();
    const double ht = spec.h_t(), hx = spec.h_x();
    const double cell = std::pow(hx, spec.n) * ht;
    std::vector<int> m(spec.n);
    std::vector<double> x(spec.n);
    quadrature::Accumulator outer;
    for (int j = 0; j < spec.N_t; ++j) {
        double t = spec.t_node(j);
        double wt = axis_weight(j, spec.N_t);
        quadrature::Accumulator inner;
        for (std::size_t mm = 0; mm < sx; ++mm) {
            if (!mask.empty() && !mask[j * sx + mm]) continue;
            spec.spatial_coords(mm, m);
            for (int d = 0; d < spec.n; ++d) x[d] = spec.x_node(m[d]);
            double wv = w.node_value(t, x, ht, hx);
            double av = std::abs(f.at(j, mm));
            inner.add(spatial_trap_weight(spec, m) * wv * std::pow(av, p));
        }
        outer.add(wt * inner.value());
    }
    return std::pow(outer.value() * cell, 1.0 / p);
}

double mixed_norm(const GridFunction& f, double q, double p, const WeightSpec& nu,
                  const WeightSpec& omega, const Mask& mask) {
    if (!(p >= 1.0) || !(q >= 1.0))
        throw std::invalid_argument("mixed_norm: exponents must be >= 1");
    const GridSpec& spec = f.spec;
    const std::size_t sx = spec.spatial_size();
    const double ht = spec.h_t(), hx = spec.h_x();
    const double cx = std::pow(hx, spec.n);
    std::vector<int> m(spec.n);
    std::vector<double> x(spec.n);
    quadrature::Accumulator outer;
    for (int j = 0; j < spec.N_t; ++j) {
        double t = spec.t_node(j);
        quadrature::Accumulator inner;
        for (std::size_t mm = 0; mm < sx; ++mm) {
            if (!mask.empty() && !mask[j * sx + mm]) continue;
            spec.spatial_coords(mm, m);
            for (int d = 0; d < spec.n; ++d) x[d] = spec.x_node(m[d]);
            double wv = omega.node_value(t, x, ht, hx);
            inner.add(spatial_trap_weight(spec, m) * wv * std::pow(std::abs(f.at(j, mm)), p));
        }
        double slice_p = inner.value() * cx;  // ||f(t,.)||_p^p
        double nuv = nu.node_value(t, {}, ht, hx);
        outer.add(axis_weight(j, spec.N_t) * nuv * std::pow(slice_p, q / p));
    }
    return std::pow(outer.value() * ht, 1.0 / q);
}

double weak_level_measure(const GridFunction& f, double p, const WeightSpec& omega,
                          const WeightSpec& nu, double lambda, const Mask& mask) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weak_level_measure: lambda must be > 0");
    const GridSpec& spec = f.spec;
    const std::size_t sx = spec.spatial_size();
    const double ht = spec.h_t(), hx = spec.h_x();
    const double cx = std::pow(hx, spec.n);
    std::vector<int> m(spec.n);
    std::vector<double> x(spec.n);
    quadrature::Accumulator meas;
    for (int j = 0; j < spec.N_t; ++j) {
        double t = spec.t_node(j);
        quadrature::Accumulator inner;
        for (std::size_t mm = 0; mm < sx; ++mm) {
            if (!mask.empty() && !mask[j * sx + mm]) continue;
            spec.spatial_coords(mm, m);
            for (int d = 0; d < spec.n; ++d) x[d] = spec.x_node(m[d]);
            double wv = omega.node_value(t, x, ht, hx);
            inner.add(spatial_trap_weight(spec, m) * wv * std::pow(std::abs(f.at(j, mm)), p));
        }
        double slice_norm = std::pow(inner.value() * cx, 1.0 / p);
        if (slice_norm > lambda) {
            meas.add(axis_weight(j, spec.N_t) * nu.node_value(t, {}, ht, hx));
        }
    }
    return meas.value() * ht;
}

double sup_abs(const GridFunction& f, const Mask& mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        s = std::max(s, std::abs(f.values[i]));
    }
    return s;
}

FdField finite_difference(const GridFunction& f, FdKind kind, int i, int j) {
    const GridSpec& spec = f.spec;
    if (i < 0 || i >= spec.n || j < 0 || j >= spec.n)
        throw std::invalid_argument("finite_difference: axis out of range");
    if (spec.N_t < 3 || spec.N_x < 3)
        throw std::invalid_argument("finite_difference: grid too small for stencil");
    const std::size_t sx = spec.spatial_size();
    FdField out{zeros(spec), Mask(spec.total_size(), 0)};
    std::vector<int> m(spec.n);

    auto shift_index = [&](std::span<const int> base, int axis, int delta) {
        std::size_t idx = 0;
        for (int d = 0; d < spec.n; ++d) {
            int c = base[d] + (d == axis ? delta : 0);
            idx = idx * spec.N_x + c;
        }
        return idx;
    };

    const double ht = spec.h_t(), hx = spec.h_x();
    for (int jt = 0; jt < spec.N_t; ++jt) {
        for (std::size_t mm = 0; mm < sx; ++mm) {
            spec.spatial_coords(mm, m);
            bool interior_t = jt > 0 && jt < spec.N_t - 1;
            bool interior_x = true;
            for (int d = 0; d < spec.n; ++d)
                interior_x = interior_x && m[d] > 0 && m[d] < spec.N_x - 1;
            if (!interior_t || !interior_x) continue;
            double v = 0.0;
            switch (kind) {
                case FdKind::time:
                    v = (f.at(jt + 1, mm) - f.at(jt - 1, mm)) / (2.0 * ht);
                    break;
                case FdKind::space:
                    v = (f.at(jt, shift_index(m, i, 1)) - f.at(jt, shift_index(m, i, -1))) /
                        (2.0 * hx);
                    break;
                case FdKind::space2:
                    if (i == j) {
                        v = (f.at(jt, shift_index(m, i, 1)) - 2.0 * f.at(jt, mm) +
                             f.at(jt, shift_index(m, i, -1))) /
                            (hx * hx);
                    } else {
                        std::vector<int> mp(m.begin(), m.end());
                        auto idx4 = [&](int di, int dj) {
                            mp.assign(m.begin(), m.end());
                            mp[i] += di;
                            mp[j] += dj;
                            std::size_t idx = 0;
                            for (int d = 0; d < spec.n; ++d) idx = idx * spec.N_x + mp[d];
                            return idx;
                        };
                        v = (f.at(jt, idx4(1, 1)) - f.at(jt, idx4(1, -1)) -
                             f.at(jt, idx4(-1, 1)) + f.at(jt, idx4(-1, -1))) /
                            (4.0 * hx * hx);
                    }
                    break;
            }
            out.values.at(jt, mm) = v;
            out.valid[jt * sx + mm] = 1;
        }
    }
    return out;
}

Mask interior_mask(const GridSpec& spec, double margin_t, double margin_x) {
    const std::size_t sx = spec.spatial_size();
    Mask mask(spec.total_size(), 0);
    std::vector<int> m(spec.n);
    for (int j = 0; j < spec.N_t; ++j) {
        double t = spec.t_node(j);
        if (t - spec.t_min < margin_t || spec.t_max - t < margin_t) continue;
        for (std::size_t mm = 0; mm < sx; ++mm) {
            spec.spatial_coords(mm, m);
            bool ok = true;
            for (int d = 0; d < spec.n && ok; ++d) {
                double x = spec.x_node(m[d]);
                ok = (x + spec.L >= margin_x) && (spec.L - x >= margin_x);
            }
            if (ok) mask[j * sx + mm] = 1;
        }
    }
    return mask;
}

Mask mask_and(const Mask& a, const Mask& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.size() != b.size()) throw std::invalid_argument("mask_and: size mismatch");
    Mask out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

double rel_l2_error(const GridFunction& a, const GridFunction& b, const Mask& mask) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("rel_l2_error: size mismatch");
    quadrature::Accumulator num, den;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (!mask.empty() && !mask[i]) continue;
        double d = a.values[i] - b.values[i];
        num.add(d * d);
        den.add(b.values[i] * b.values[i]);
    }
    double dv = den.value();
    if (dv <= 0.0) return std::sqrt(num.value());
    return std::sqrt(num.value() / dv);
}

}  // namespace parlab
