#pragma once

#include <array>
#include <vector>

#include "parlab/grid.hpp"

namespace parlab::riesz {

// The dimensional constants of the pointwise limit formulas:
// A_n = (1/(n Gamma(n/2))) INT_{1/4}^inf w^{n/2} e^{-w} dw/w,
// B_n = (1/Gamma(n/2)) INT_0^{1/4} w^{n/2} e^{-w} dw/w.
struct Constants {
    int n = 1;
    double A_n = 0.0;
    double B_n = 0.0;
};

// Adaptive quadrature of both integrals; n*A_n + B_n = 1 is asserted to
// 1e-12 (the two pieces split Gamma(n/2) at w = 1/4).
Constants constants(int n);

enum class RieszKind { ij, t };
enum class TruncationGeometry { omega, sigma };

struct TruncationSchedule {
    std::vector<double> eps;  // strictly decreasing
    TruncationGeometry geometry = TruncationGeometry::omega;

    void validate(const GridSpec& spec) const;
    static TruncationSchedule geometric(double eps_max, int count, double ratio = 0.5);
};

struct SolveOptions {
    bool periodic = false;  // periodized input (no compact-support requirement)
};

struct SolveReport {
    GridFunction u;
    double interior_residual_rel = 0.0;  // ||d_t u - L u - f||_2 / ||f||_2, FD interior
    Mask residual_mask;
};

// u(t,x) = INT_0^inf INT W(tau,y) f(t-tau, x-y) dy dtau by nested
// quadrature (grid-aligned time steps; the tau -> 0 endpoint is the exact
// limit f(t,x)). Default semantics are free-space: f must be compactly
// supported in the grid interior (support touching the boundary is
// rejected); periodic=true switches to the periodization-box reading.
SolveReport solve_heat_global(const GridFunction& f, const SolveOptions& opts = {});

// Same with the Mehler kernel; residual of d_t u - Delta u + |x|^2 u - f.
SolveReport solve_hermite_global(const GridFunction& f, const SolveOptions& opts = {});

SolveReport solve_global(Evolution op, const GridFunction& f, const SolveOptions& opts = {});

struct CauchyReport {
    GridFunction v;
    double interior_residual_rel = 0.0;
    double initial_trace_error = 0.0;  // max |v(h_t, .) - g| over the spatial grid
    Mask residual_mask;
};

// Two-term Duhamel formula for the Cauchy problem on t >= 0 (t_min must be
// 0): source term over 0 < tau < t plus the semigroup applied to g.
CauchyReport solve_cauchy(Evolution op, const GridFunction& f, const std::vector<double>& g);

struct TruncationOptions {
    bool cauchy = false;  // restrict to tau < t - t_min (implied by sigma)
};

// Truncated singular integral over Omega_eps = {max(tau^{1/2}, |z|) > eps}
// (geometry omega) or Sigma_eps = {tau > eps} (geometry sigma; Cauchy
// semantics). The excluded region's boundary is handled exactly: the field
// integral and the cylinder integral are quadratured separately and
// subtracted, so no cell straddles the max-metric boundary.
GridFunction truncated_riesz(Evolution op, const GridFunction& f, double eps, RieszKind which,
                             int i, int j, TruncationGeometry geometry,
                             const TruncationOptions& opts = {});

struct LimitResult {
    GridFunction values;
    double order = 0.0;    // empirical extrapolation order in eps
    bool converged = false;
};

// eps -> 0 limit of the truncated integrals (Richardson extrapolation with
// the empirically fitted order) plus the local term -A_n delta_ij f
// (which=ij) or +B_n f (which=t). Throws when the ratio test fails.
LimitResult riesz_limit(Evolution op, const GridFunction& f, const TruncationSchedule& schedule,
                        RieszKind which, int i, int j);

// Pointwise sup over the schedule of |truncated integral|.
GridFunction maximal_truncation(Evolution op, const GridFunction& f,
                                const TruncationSchedule& schedule, RieszKind which, int i, int j);

// The (Omega_eps - Sigma_{eps^2}) comparison integral, computed as the one
// slab integral over {0 < tau <= eps^2, |z| > eps}; converges to
// delta_ij A_n f as eps -> 0 (heat kernel).
GridFunction truncation_comparison(const GridFunction& f, double eps, int i, int j);

struct Lemma32Report {
    int n = 0;
    std::vector<double> eps;
    // per-eps values of quantities (i)-(iv)
    std::vector<std::array<double, 4>> values;
    std::array<double, 4> limits{};  // {0, -A_n, B_n, 0}
};

Lemma32Report lemma32_verify(int n, const std::vector<double>& eps_schedule);

}  // namespace parlab::riesz
