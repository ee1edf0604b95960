#pragma once

#include <memory>
#include <span>

namespace parlab {

struct GridFunction;

// Weight descriptions used by norms and by the Muckenhoupt estimators.
//   unit          w == 1
//   power_t(a)    w(t) = |t|^a
//   power_x(b)    w(x) = |x|^b  (Euclidean norm of the spatial point)
//   tensor        w(t,x) = nu(t) * omega(x)
//   tabulated     w sampled on a grid (node evaluation only)
struct WeightSpec {
    enum class Kind { unit, power_t, power_x, tensor, tabulated };

    Kind kind = Kind::unit;
    double exponent = 0.0;
    double scale = 1.0;  // positive multiplicative constant
    std::shared_ptr<const WeightSpec> nu;     // tensor: time factor
    std::shared_ptr<const WeightSpec> omega;  // tensor: space factor
    std::shared_ptr<const GridFunction> table;

    static WeightSpec unit();
    static WeightSpec power_t(double a);
    static WeightSpec power_x(double b);
    static WeightSpec tensor(WeightSpec time_part, WeightSpec space_part);
    static WeightSpec tabulated(std::shared_ptr<const GridFunction> values);

    WeightSpec scaled(double c) const;

    bool is_unit() const { return kind == Kind::unit; }

    // Raw pointwise value (may be 0 or +inf at weight singularities).
    double value(double t, std::span<const double> x) const;

    // Node value for quadrature: where the raw value is 0 or +inf the weight
    // is replaced by its cell average over the surrounding cell when the
    // 1-D antiderivative is available, else the singular coordinate is
    // nudged by half a cell.
    double node_value(double t, std::span<const double> x, double cell_t,
                      double cell_x) const;

    // Exact integral of |s|^a over [lo, hi]; +inf when a <= -1 and the
    // interval touches 0. Shared by the A_p ball averages.
    static double abs_pow_integral(double a, double lo, double hi);
};

}  // namespace parlab
