#pragma once

#include <cstdint>
#include <vector>

#include "parlab/weight_spec.hpp"

namespace parlab::weights {

enum class Geometry {
    euclidean_time,   // intervals |t - c| < r
    parabolic_time,   // intervals |t - c| < r^2 (the |t-s|^{1/2} metric)
    euclidean_space,  // Euclidean balls |x - c| < r
    parabolic         // cylinders |t - c| < r^2, |x - c| < r
};

// Parabolic ball descriptor and measure: |B((t,x), r)| = 2 r^2 v_n r^n.
struct ParabolicBall {
    double t_center = 0.0;
    std::vector<double> x_center;
    double r = 0.0;
    double time_halfwidth = 0.0;  // r^2
    double space_radius = 0.0;    // r
    double measure = 0.0;
};

ParabolicBall parabolic_ball(double t_center, std::vector<double> x_center, double r);

struct BallSampler {
    std::size_t count = 1000;
    double r_min = 1e-3;
    double r_max = 1.0;
    double center_box = 1.0;  // centers uniform in [-box, box] per coordinate
    std::uint64_t seed = 2024;
};

struct ApReport {
    double p = 2.0;
    Geometry geometry = Geometry::euclidean_time;
    double constant = 0.0;  // sampled max of the averaged product (+inf possible)
    std::size_t ball_count = 0;
    std::size_t infinite_balls = 0;  // balls with a genuinely divergent average
    double r_min = 0.0, r_max = 0.0;
    double worst_radius = 0.0;
    double worst_t = 0.0;
    std::vector<double> worst_x;
    std::vector<double> decade_max;  // per radius decade, ascending radius
};

// Sampled maximum over balls of the A_p product
// (avg_B w)(avg_B w^{1/(1-p)})^{p-1}; averages of power weights use exact
// antiderivatives, so nonintegrable weights report +inf rather than noise.
ApReport ap_estimate(const WeightSpec& w, double p, Geometry geometry, int n,
                     const BallSampler& sampler);

// Sampled sup over balls of (avg_B w) / (essinf_B w).
ApReport a1_estimate(const WeightSpec& w, Geometry geometry, int n, const BallSampler& sampler);

// Operational membership call: an estimate is divergent when it is infinite
// or when refining r_min tenfold grows it at least tenfold; stable when the
// drift stays within 10%.
enum class Classification { stable, divergent, inconclusive };
Classification classify(const WeightSpec& w, double p, Geometry geometry, int n,
                        const BallSampler& sampler);
Classification classify_a1(const WeightSpec& w, Geometry geometry, int n,
                           const BallSampler& sampler);

struct TensorProbeReport {
    ApReport nu_sqrt_metric;   // A_p of nu under the |t-s|^{1/2} distance
    ApReport nu_euclidean;
    ApReport omega_euclidean;
    ApReport tensor_parabolic;  // A_p^* of nu x omega over parabolic balls
};

// Probes the tensor-product route into the parabolic Muckenhoupt class.
TensorProbeReport tensor_parabolic_probe(const WeightSpec& nu, const WeightSpec& omega, double p,
                                         int n, const BallSampler& sampler);

}  // namespace parlab::weights
