#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "parlab/weight_spec.hpp"

namespace parlab {

// Discretized space-time box [t_min, t_max] x [-L, L]^n with uniform nodes
// along every axis (N_x odd so the spatial origin is a node).
struct GridSpec {
    int n = 1;
    double L = 1.0;
    int N_x = 3;
    double t_min = 0.0;
    double t_max = 1.0;
    int N_t = 3;

    void validate() const;  // throws std::invalid_argument naming the violated invariant

    double h_x() const { return 2.0 * L / (N_x - 1); }
    double h_t() const { return (t_max - t_min) / (N_t - 1); }
    double t_node(int j) const { return t_min + j * h_t(); }
    double x_node(int m) const { return -L + m * h_x(); }

    std::size_t spatial_size() const;                 // N_x^n
    std::size_t total_size() const;                   // N_t * N_x^n
    std::size_t spatial_index(std::span<const int> m) const;
    void spatial_coords(std::size_t flat, std::span<int> m) const;

    bool operator==(const GridSpec&) const = default;
};

struct Grid {
    GridSpec spec;
    std::vector<double> t_nodes;
    std::vector<double> x_nodes;  // per-axis nodes (all spatial axes share them)
};

Grid build_grid(const GridSpec& spec);

using Mask = std::vector<std::uint8_t>;

struct GridFunction {
    GridSpec spec;
    std::vector<double> values;  // t-major, spatial flat index minor

    double& at(int j, std::size_t m) { return values[j * spec.spatial_size() + m]; }
    double at(int j, std::size_t m) const { return values[j * spec.spatial_size() + m]; }
    double* slice(int j) { return values.data() + j * spec.spatial_size(); }
    const double* slice(int j) const { return values.data() + j * spec.spatial_size(); }
};

GridFunction zeros(const GridSpec& spec);

// Closed-form function descriptor; the callable receives (t, x[0..n-1]).
struct FieldDescriptor {
    std::string name;
    std::function<double(double t, std::span<const double> x)> f;
};

// Pointwise, deterministic evaluation. A non-finite value is an error
// naming the offending node.
GridFunction sample(const FieldDescriptor& fdesc, const GridSpec& spec);

// Seeded random test family: a space-time trigonometric polynomial on the
// box's frequency lattice (wavenumbers <= max_wavenumber per axis,
// coefficients uniform in [-1,1]) times a fixed smooth bump supported in
// the inner support_fraction of the box.
struct RandomFamilyParams {
    int max_wavenumber = 5;
    int max_wavenumber_t = -1;  // time-axis cap; < 0 means max_wavenumber
    int mode_count = 8;
    double support_fraction = 0.5;
    bool nondegenerate_modes = false;  // redraw modes with a zero wavenumber on any axis
};
FieldDescriptor random_family_descriptor(const GridSpec& spec, std::uint64_t seed,
                                         const RandomFamilyParams& params = {});

// Smooth bump supported on |r| < 1 with bump(0) = 1.
double bump(double r);

// Mean over the periodic representative (duplicated end nodes dropped).
double periodic_mean(const GridFunction& f);

// The family field minus a bump multiple: compactly supported, smooth, and
// with zero periodic mean (so it lies in the domain of every multiplier
// route without zero-mode bookkeeping).
GridFunction mean_free_family_field(const GridSpec& spec, std::uint64_t seed,
                                    const RandomFamilyParams& params = {});

// Exponent/weight description of a norm; q absent (<= 0) means the plain
// joint norm with weight w.
struct NormSpec {
    double p = 2.0;
    double q = -1.0;
    WeightSpec nu;
    WeightSpec omega;
    WeightSpec w;
};

// Trapezoid-weighted discrete (integral w |f|^p)^{1/p} over the box.
// An empty mask means all nodes.
double lp_norm(const GridFunction& f, double p, const WeightSpec& w, const Mask& mask = {});

// Mixed norm: time q-norm (weight nu) of the spatial p-norms (weight omega).
double mixed_norm(const GridFunction& f, double q, double p, const WeightSpec& nu,
                  const WeightSpec& omega, const Mask& mask = {});

// nu-measure of { t : || f(t,.) ||_{L^p(omega)} > lambda }.
double weak_level_measure(const GridFunction& f, double p, const WeightSpec& omega,
                          const WeightSpec& nu, double lambda, const Mask& mask = {});

// Debug statistic (sup over nodes); not a norm of the library's L^p family.
double sup_abs(const GridFunction& f, const Mask& mask = {});

enum class FdKind { time, space, space2 };

struct FdField {
    GridFunction values;
    Mask valid;  // interior nodes where the stencil fits
};

// Second-order centered finite differences: time derivative, d/dx_i,
// or d^2/dx_i dx_j. Axes i, j are 0-based.
FdField finite_difference(const GridFunction& f, FdKind kind, int i = 0, int j = 0);

// Mask of nodes at distance >= margin_t (time) and >= margin_x (space, per
// axis, in coordinate units) from the box boundary.
Mask interior_mask(const GridSpec& spec, double margin_t, double margin_x);

Mask mask_and(const Mask& a, const Mask& b);

// Relative L2 distance over masked nodes: ||a-b|| / ||b||.
double rel_l2_error(const GridFunction& a, const GridFunction& b, const Mask& mask = {});

// The two evolution generators the solvers and transforms act for.
enum class Evolution { heat, hermite };

}  // namespace parlab
