#include "parlab/weight_spec.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parlab/grid.hpp"

namespace parlab {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}
}  // namespace

WeightSpec WeightSpec::unit() { return {}; }

WeightSpec WeightSpec::power_t(double a) {
    WeightSpec w;
    w.kind = Kind::power_t;
    w.exponent = a;
    return w;
}

WeightSpec WeightSpec::power_x(double b) {
    WeightSpec w;
    w.kind = Kind::power_x;
    w.exponent = b;
    return w;
}

WeightSpec WeightSpec::tensor(WeightSpec time_part, WeightSpec space_part) {
    WeightSpec w;
    w.kind = Kind::tensor;
    w.nu = std::make_shared<WeightSpec>(std::move(time_part));
    w.omega = std::make_shared<WeightSpec>(std::move(space_part));
    return w;
}

WeightSpec WeightSpec::tabulated(std::shared_ptr<const GridFunction> values) {
    WeightSpec w;
    w.kind = Kind::tabulated;
    w.table = std::move(values);
    return w;
}

WeightSpec WeightSpec::scaled(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("WeightSpec::scaled: factor must be positive");
    WeightSpec w = *this;
    w.scale *= c;
    return w;
}

namespace {
double abs_pow(double r, double a) {
    if (a == 0.0) return 1.0;
    if (r == 0.0) return a > 0.0 ? 0.0 : inf;
    return std::pow(std::abs(r), a);
}
}  // namespace

double WeightSpec::value(double t, std::span<const double> x) const {
    switch (kind) {
        case Kind::unit:
            return scale;
        case Kind::power_t:
            return scale * abs_pow(t, exponent);
        case Kind::power_x:
            return scale * abs_pow(norm2(x), exponent);
        case Kind::tensor:
            return scale * nu->value(t, x) * omega->value(t, x);
        case Kind::tabulated: {
            if (!table) throw std::invalid_argument("tabulated weight has no table");
            // scale applied at the return below
            const GridSpec& s = table->spec;
            // node evaluation: snap to the nearest node
            int j = static_cast<int>(std::lround((t - s.t_min) / s.h_t()));
            j = std::clamp(j, 0, s.N_t - 1);
            std::size_t m = 0;
            for (int d = 0; d < s.n; ++d) {
                int md = static_cast<int>(std::lround((x[d] + s.L) / s.h_x()));
                md = std::clamp(md, 0, s.N_x - 1);
                m = m * s.N_x + md;
            }
            return scale * table->at(j, m);
        }
    }
    return scale;
}

double WeightSpec::node_value(double t, std::span<const double> x, double cell_t,
                              double cell_x) const {
    switch (kind) {
        case Kind::unit:
            return scale;
        case Kind::power_t: {
            double v = abs_pow(t, exponent);
            if (std::isfinite(v) && v != 0.0) return scale * v;
            if (exponent > -1.0) {
                // cell average of |s|^a over [t-h/2, t+h/2] with t = 0
                double h2 = 0.5 * cell_t;
                return scale * std::pow(h2, exponent) / (exponent + 1.0);
            }
            return scale * abs_pow(0.5 * cell_t, exponent);
        }
        case Kind::power_x: {
            double v = abs_pow(norm2(x), exponent);
            if (std::isfinite(v) && v != 0.0) return scale * v;
            if (x.size() == 1 && exponent > -1.0) {
                double h2 = 0.5 * cell_x;
                return scale * std::pow(h2, exponent) / (exponent + 1.0);
            }
            return scale * abs_pow(0.5 * cell_x, exponent);
        }
        case Kind::tensor:
            return scale * nu->node_value(t, x, cell_t, cell_x) *
                   omega->node_value(t, x, cell_t, cell_x);
        case Kind::tabulated:
            return value(t, x);
    }
    return scale;
}

double WeightSpec::abs_pow_integral(double a, double lo, double hi) {
    if (lo > hi) std::swap(lo, hi);
    auto one_side = [&](double u) {
        // integral over [0, u] of s^a, u >= 0
        if (u <= 0.0) return 0.0;
        if (a <= -1.0) return inf;
        return std::pow(u, a + 1.0) / (a + 1.0);
    };
    if (lo >= 0.0) return one_side(hi) - one_side(lo);
    if (hi <= 0.0) return one_side(-lo) - one_side(-hi);
    return one_side(-lo) + one_side(hi);
}

}  // namespace parlab
