#include "parlab/weights.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "parlab/grid.hpp"
#include "parlab/special.hpp"

namespace parlab::weights {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Ball {
    bool has_time = false;
    double t_center = 0.0;
    double t_half = 0.0;
    bool has_space = false;
    std::vector<double> x_center;
    double r_space = 0.0;
};

// average of w^q over the ball; exact for power/tensor/unit weights, seeded
// midpoint sampling otherwise
double avg_pow(const WeightSpec& w, double q, const Ball& ball, int n, std::uint64_t sample_seed);

double sample_average(const WeightSpec& w, double q, const Ball& ball, int n,
                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int count = 2048;
    double acc = 0.0;
    std::vector<double> x(n, 0.0);
    int kept = 0;
    for (int k = 0; k < count; ++k) {
        double t = ball.has_time ? ball.t_center + (2.0 * u01() - 1.0) * ball.t_half : 0.0;
        if (ball.has_space) {
            // rejection sampling in the bounding cube
            double rr = 0.0;
            do {
                rr = 0.0;
                for (int d = 0; d < n; ++d) {
                    x[d] = (2.0 * u01() - 1.0) * ball.r_space;
                    rr += x[d] * x[d];
                }
            } while (rr > ball.r_space * ball.r_space);
            for (int d = 0; d < n; ++d) x[d] += ball.x_center[d];
        }
        double v = w.value(t, x);
        acc += std::pow(v, q);
        ++kept;
    }
    return acc / kept;
}

double avg_pow(const WeightSpec& w, double q, const Ball& ball, int n,
               std::uint64_t sample_seed) {
    switch (w.kind) {
        case WeightSpec::Kind::unit:
            return std::pow(w.scale, q);
        case WeightSpec::Kind::power_t: {
            if (!ball.has_time)
                throw std::invalid_argument("ap_estimate: time weight with space-only geometry");
            double a = w.exponent * q;
            double lo = ball.t_center - ball.t_half, hi = ball.t_center + ball.t_half;
            double integral = WeightSpec::abs_pow_integral(a, lo, hi);
            return std::pow(w.scale, q) * integral / (2.0 * ball.t_half);
        }
        case WeightSpec::Kind::power_x: {
            if (!ball.has_space)
                throw std::invalid_argument("ap_estimate: space weight with time-only geometry");
            double b = w.exponent * q;
            if (n == 1) {
                double lo = ball.x_center[0] - ball.r_space, hi = ball.x_center[0] + ball.r_space;
                double integral = WeightSpec::abs_pow_integral(b, lo, hi);
                return std::pow(w.scale, q) * integral / (2.0 * ball.r_space);
            }
            return std::pow(w.scale, q) * sample_average(w.scaled(1.0 / w.scale), q, ball, n,
                                                         sample_seed);
        }
        case WeightSpec::Kind::tensor: {
            Ball tb = ball;
            tb.has_space = false;
            Ball sb = ball;
            sb.has_time = false;
            double at = avg_pow(*w.nu, q, tb, n, sample_seed);
            double as = avg_pow(*w.omega, q, sb, n, sample_seed ^ 0x9e3779b97f4a7c15ull);
            return std::pow(w.scale, q) * at * as;
        }
        case WeightSpec::Kind::tabulated:
            return sample_average(w, q, ball, n, sample_seed);
    }
    return 1.0;
}

double ess_inf(const WeightSpec& w, const Ball& ball, int n, std::uint64_t sample_seed) {
    switch (w.kind) {
        case WeightSpec::Kind::unit:
            return w.scale;
        case WeightSpec::Kind::power_t: {
            double lo = ball.t_center - ball.t_half, hi = ball.t_center + ball.t_half;
            double a = w.exponent;
            double closest = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
            double farthest = std::max(std::abs(lo), std::abs(hi));
            double at = (a >= 0.0) ? closest : farthest;
            if (at == 0.0 && a < 0.0) return inf;
            if (at == 0.0 && a > 0.0) return 0.0;
            return w.scale * std::pow(at, a);
        }
        case WeightSpec::Kind::power_x: {
            double c = 0.0;
            for (int d = 0; d < n; ++d) c += ball.x_center[d] * ball.x_center[d];
            c = std::sqrt(c);
            double closest = std::max(0.0, c - ball.r_space);
            double farthest = c + ball.r_space;
            double b = w.exponent;
            double at = (b >= 0.0) ? closest : farthest;
            if (at == 0.0 && b < 0.0) return inf;
            if (at == 0.0 && b > 0.0) return 0.0;
            return w.scale * std::pow(at, b);
        }
        case WeightSpec::Kind::tensor: {
            Ball tb = ball;
            tb.has_space = false;
            Ball sb = ball;
            sb.has_time = false;
            return w.scale * ess_inf(*w.nu, tb, n, sample_seed) *
                   ess_inf(*w.omega, sb, n, sample_seed);
        }
        case WeightSpec::Kind::tabulated: {
            std::mt19937_64 rng(sample_seed);
            auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
            double m = inf;
            std::vector<double> x(n, 0.0);
            for (int k = 0; k < 2048; ++k) {
                double t = ball.has_time ? ball.t_center + (2.0 * u01() - 1.0) * ball.t_half : 0.0;
                if (ball.has_space) {
                    for (int d = 0; d < n; ++d)
                        x[d] = ball.x_center[d] + (2.0 * u01() - 1.0) * ball.r_space;
                }
                m = std::min(m, w.value(t, x));
            }
            return m;
        }
    }
    return 1.0;
}

Ball make_ball(Geometry geom, double t_c, const std::vector<double>& x_c, double r) {
    Ball b;
    switch (geom) {
        case Geometry::euclidean_time:
            b.has_time = true;
            b.t_center = t_c;
            b.t_half = r;
            break;
        case Geometry::parabolic_time:
            b.has_time = true;
            b.t_center = t_c;
            b.t_half = r * r;
            break;
        case Geometry::euclidean_space:
            b.has_space = true;
            b.x_center = x_c;
            b.r_space = r;
            break;
        case Geometry::parabolic:
            b.has_time = true;
            b.t_center = t_c;
            b.t_half = r * r;
            b.has_space = true;
            b.x_center = x_c;
            b.r_space = r;
            break;
    }
    return b;
}

template <typename ProductFn>
ApReport run_estimate(const WeightSpec& w, double p, Geometry geom, int n,
                      const BallSampler& sampler, ProductFn&& product) {
    if (sampler.count == 0) throw std::invalid_argument("ap_estimate: empty sampler");
    std::mt19937_64 rng(sampler.seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    ApReport rep;
    rep.p = p;
    rep.geometry = geom;
    rep.ball_count = sampler.count;
    rep.r_min = sampler.r_min;
    rep.r_max = sampler.r_max;
    int decades = std::max(1, static_cast<int>(std::ceil(std::log10(sampler.r_max /
                                                                    sampler.r_min))));
    rep.decade_max.assign(decades, 0.0);

    std::vector<double> x_c(n);
    for (std::size_t k = 0; k < sampler.count; ++k) {
        double r = sampler.r_min *
                   std::pow(sampler.r_max / sampler.r_min, u01());
        double t_c = (2.0 * u01() - 1.0) * sampler.center_box;
        for (int d = 0; d < n; ++d) x_c[d] = (2.0 * u01() - 1.0) * sampler.center_box;
        Ball ball = make_ball(geom, t_c, x_c, r);
        double prod = product(w, ball, n, sampler.seed + 7919 * k);
        if (std::isinf(prod)) ++rep.infinite_balls;
        int dec = std::min<int>(decades - 1,
                                static_cast<int>(std::log10(r / sampler.r_min)));
        if (prod > rep.decade_max[dec] || std::isinf(prod)) {
            if (std::isinf(prod)) rep.decade_max[dec] = inf;
            else rep.decade_max[dec] = prod;
        }
        if (prod > rep.constant || std::isinf(prod)) {
            rep.constant = prod;
            rep.worst_radius = r;
            rep.worst_t = t_c;
            rep.worst_x = x_c;
        }
    }
    return rep;
}

}  // namespace

ParabolicBall parabolic_ball(double t_center, std::vector<double> x_center, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("parabolic_ball: r must be positive");
    ParabolicBall b;
    b.t_center = t_center;
    b.x_center = std::move(x_center);
    b.r = r;
    b.time_halfwidth = r * r;
    b.space_radius = r;
    int n = static_cast<int>(b.x_center.size());
    b.measure = 2.0 * r * r * special::unit_ball_volume(n) * std::pow(r, n);
    return b;
}

ApReport ap_estimate(const WeightSpec& w, double p, Geometry geometry, int n,
                     const BallSampler& sampler) {
    if (!(p > 1.0)) throw std::invalid_argument("ap_estimate: p must exceed 1");
    return run_estimate(w, p, geometry, n, sampler,
                        [p](const WeightSpec& ww, const Ball& ball, int nn, std::uint64_t seed) {
                            double a1 = avg_pow(ww, 1.0, ball, nn, seed);
                            double a2 = avg_pow(ww, 1.0 / (1.0 - p), ball, nn, seed ^ 0x5bf0ull);
                            if (std::isinf(a1) || std::isinf(a2)) return inf;
                            return a1 * std::pow(a2, p - 1.0);
                        });
}

ApReport a1_estimate(const WeightSpec& w, Geometry geometry, int n, const BallSampler& sampler) {
    ApReport rep = run_estimate(
        w, 1.0, geometry, n, sampler,
        [](const WeightSpec& ww, const Ball& ball, int nn, std::uint64_t seed) {
            double avg = avg_pow(ww, 1.0, ball, nn, seed);
            double lo = ess_inf(ww, ball, nn, seed ^ 0xa5a5ull);
            if (std::isinf(avg) || lo == 0.0) return inf;
            if (std::isinf(lo)) return 0.0;
            return avg / lo;
        });
    return rep;
}

namespace {

Classification classify_impl(double coarse, double fine) {
    if (std::isinf(fine) || std::isinf(coarse)) return Classification::divergent;
    if (fine >= 10.0 * coarse) return Classification::divergent;
    if (fine <= 1.10 * coarse) return Classification::stable;
    return Classification::inconclusive;
}

}  // namespace

Classification classify(const WeightSpec& w, double p, Geometry geometry, int n,
                        const BallSampler& sampler) {
    ApReport coarse = ap_estimate(w, p, geometry, n, sampler);
    BallSampler refined = sampler;
    refined.r_min *= 0.1;
    ApReport fine = ap_estimate(w, p, geometry, n, refined);
    return classify_impl(coarse.constant, fine.constant);
}

Classification classify_a1(const WeightSpec& w, Geometry geometry, int n,
                           const BallSampler& sampler) {
    ApReport coarse = a1_estimate(w, geometry, n, sampler);
    BallSampler refined = sampler;
    refined.r_min *= 0.1;
    ApReport fine = a1_estimate(w, geometry, n, refined);
    return classify_impl(coarse.constant, fine.constant);
}

TensorProbeReport tensor_parabolic_probe(const WeightSpec& nu, const WeightSpec& omega, double p,
                                         int n, const BallSampler& sampler) {
    TensorProbeReport rep;
    rep.nu_sqrt_metric = ap_estimate(nu, p, Geometry::parabolic_time, 1, sampler);
    rep.nu_euclidean = ap_estimate(nu, p, Geometry::euclidean_time, 1, sampler);
    rep.omega_euclidean = ap_estimate(omega, p, Geometry::euclidean_space, n, sampler);
    rep.tensor_parabolic =
        ap_estimate(WeightSpec::tensor(nu, omega), p, Geometry::parabolic, n, sampler);
    return rep;
}

}  // namespace parlab::weights
