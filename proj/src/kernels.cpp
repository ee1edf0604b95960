#include "parlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "parlab/quadrature.hpp"
#include "parlab/special.hpp"

namespace parlab::kernels {

namespace {

void require_tau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("kernel: tau must be positive");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2sq(std::span<const double> a) { return dot(a, a); }

using special::log_sinh;

struct Hyp {
    double coth;    // coth tau
    double tanh;    // tanh tau
    double csch2;   // 1/sinh^2 tau
    double sech2;   // 1/cosh^2 tau
    double coth2t;  // coth 2tau
    double csch2_2t;  // 1/sinh^2 2tau
    double log_s;   // log S(tau) for dimension n (filled by caller)
};

Hyp hyperbolics(double tau) {
    Hyp h;
    h.coth = 1.0 + 2.0 / std::expm1(2.0 * tau);
    h.tanh = std::tanh(tau);
    double sh = std::sinh(tau);
    double ch = std::cosh(tau);
    h.csch2 = 1.0 / (sh * sh);
    h.sech2 = 1.0 / (ch * ch);
    h.coth2t = 1.0 + 2.0 / std::expm1(4.0 * tau);
    double sh2 = std::sinh(2.0 * tau);
    h.csch2_2t = 1.0 / (sh2 * sh2);
    return h;
}

// log S(tau) = -(n/2) log(2 pi sinh 2tau), overflow-free for any tau > 0.
double log_S(int n, double tau) {
    return -0.5 * n * (std::log(2.0 * M_PI) + log_sinh(2.0 * tau));
}

}  // namespace

double gauss_weierstrass(int n, double tau, std::span<const double> y) {
    require_tau(tau);
    double log_w = -0.5 * n * std::log(4.0 * M_PI * tau) - norm2sq(y) / (4.0 * tau);
    return std::exp(log_w);
}

double gw_derivative(GwDerivative kind, int n, double tau, std::span<const double> y, int i,
                     int j) {
    require_tau(tau);
    double w = gauss_weierstrass(n, tau, y);
    switch (kind) {
        case GwDerivative::d_i:
            return -y[i] / (2.0 * tau) * w;
        case GwDerivative::d_ij: {
            double d = (i == j) ? -1.0 / (2.0 * tau) : 0.0;
            return (d + y[i] * y[j] / (4.0 * tau * tau)) * w;
        }
        case GwDerivative::d_tau:
            return (-0.5 * n / tau + norm2sq(y) / (4.0 * tau * tau)) * w;
    }
    return 0.0;
}

double gw_third_derivative(int n, double tau, std::span<const double> y, int i, int j, int k) {
    require_tau(tau);
    double w = gauss_weierstrass(n, tau, y);
    double t2 = 4.0 * tau * tau;
    double t3 = 8.0 * tau * tau * tau;
    double kron = ((i == j) ? y[k] : 0.0) + ((i == k) ? y[j] : 0.0) + ((j == k) ? y[i] : 0.0);
    return w * (kron / t2 - y[i] * y[j] * y[k] / t3);
}

double gw_dtau_dij(int n, double tau, std::span<const double> y, int i, int j) {
    require_tau(tau);
    double w = gauss_weierstrass(n, tau, y);
    double dij = (i == j) ? 1.0 : 0.0;
    double poly = -dij / (2.0 * tau) + y[i] * y[j] / (4.0 * tau * tau);
    double dpoly = dij / (2.0 * tau * tau) - y[i] * y[j] / (2.0 * tau * tau * tau);
    double wt = -0.5 * n / tau + norm2sq(y) / (4.0 * tau * tau);  // d_tau log W
    return w * (dpoly + poly * wt);
}

double gaussian_tail_radius(double tau) {
    static const double log_eps = -std::log(std::numeric_limits<double>::epsilon());
    return 2.0 * std::sqrt(tau * log_eps);
}

namespace {

struct MehlerGeom {
    std::vector<double> u;  // x - y
    std::vector<double> v;  // x + y
    double u2, v2;
};

MehlerGeom geom(std::span<const double> x, std::span<const double> y) {
    MehlerGeom g;
    g.u.resize(x.size());
    g.v.resize(x.size());
    for (std::size_t d = 0; d < x.size(); ++d) {
        g.u[d] = x[d] - y[d];
        g.v[d] = x[d] + y[d];
    }
    g.u2 = norm2sq(g.u);
    g.v2 = norm2sq(g.v);
    return g;
}

double clamp_tau(double tau) {
    require_tau(tau);
    return std::max(tau, mehler_tau_clamp);
}

double log_mehler(int n, double tau, const MehlerGeom& g, const Hyp& h) {
    return log_S(n, tau) - 0.25 * g.u2 * h.coth - 0.25 * g.v2 * h.tanh;
}

}  // namespace

double mehler(int n, double tau, std::span<const double> x, std::span<const double> y) {
    tau = clamp_tau(tau);
    MehlerGeom g = geom(x, y);
    Hyp h = hyperbolics(tau);
    return std::exp(log_mehler(n, tau, g, h));
}

double mehler_direct_form(int n, double tau, std::span<const double> x,
                          std::span<const double> y) {
    tau = clamp_tau(tau);
    MehlerGeom g = geom(x, y);
    Hyp h = hyperbolics(tau);
    double log_w = log_S(n, tau) - 0.5 * g.u2 * h.coth2t - dot(x, y) * h.tanh;
    return std::exp(log_w);
}

MehlerFactorization mehler_factors(int n, double tau, std::span<const double> x,
                                   std::span<const double> y) {
    tau = clamp_tau(tau);
    MehlerGeom g = geom(x, y);
    Hyp h = hyperbolics(tau);
    MehlerFactorization f;
    f.S = std::exp(log_S(n, tau));
    f.Hfac = std::exp(-0.25 * g.u2 * h.coth);
    f.Gfac = std::exp(-0.25 * g.v2 * h.tanh);
    f.tau = tau;
    f.x.assign(x.begin(), x.end());
    f.y.assign(y.begin(), y.end());
    return f;
}

namespace {

// polynomial factor of the ij integrand: R^H_ij = SHG * beta_ij
double beta_ij(const MehlerGeom& g, const Hyp& h, int i, int j) {
    double c = h.coth, T = h.tanh;
    double d = (i == j) ? 1.0 : 0.0;
    return -0.5 * (c + T) * d + 0.25 * c * c * g.u[i] * g.u[j] +
           0.25 * c * T * (g.u[i] * g.v[j] + g.u[j] * g.v[i]) + 0.25 * T * T * g.v[i] * g.v[j];
}

// polynomial factor of the t integrand: R^H_t = SHG * gamma
double gamma_t(int n, const MehlerGeom& g, const Hyp& h) {
    return -n * h.coth2t + 0.25 * g.u2 * h.csch2 - 0.25 * g.v2 * h.sech2;
}

}  // namespace

double hermite_riesz_integrand(HermiteRieszKind kind, int n, double tau,
                               std::span<const double> x, std::span<const double> y, int i,
                               int j) {
    if (i > j) std::swap(i, j);  // exact (i, j) exchange symmetry
    tau = clamp_tau(tau);
    MehlerGeom g = geom(x, y);
    Hyp h = hyperbolics(tau);
    double shg = std::exp(log_mehler(n, tau, g, h));
    if (kind == HermiteRieszKind::ij) return shg * beta_ij(g, h, i, j);
    return shg * gamma_t(n, g, h);
}

double hermite_riesz_grad(HermiteRieszKind kind, int n, double tau, std::span<const double> x,
                          std::span<const double> y, int i, int j, int k) {
    if (i > j) std::swap(i, j);
    tau = clamp_tau(tau);
    MehlerGeom g = geom(x, y);
    Hyp h = hyperbolics(tau);
    double shg = std::exp(log_mehler(n, tau, g, h));
    double c = h.coth, T = h.tanh;
    double dlog = 0.5 * c * g.u[k] - 0.5 * T * g.v[k];  // d/dy_k log(SHG)
    if (kind == HermiteRieszKind::ij) {
        double di = (k == i) ? 1.0 : 0.0;
        double dj = (k == j) ? 1.0 : 0.0;
        double dbeta = 0.25 * c * c * (-di * g.u[j] - dj * g.u[i]) +
                       0.25 * c * T * (-di * g.v[j] + dj * g.u[i] - dj * g.v[i] + di * g.u[j]) +
                       0.25 * T * T * (di * g.v[j] + dj * g.v[i]);
        return shg * (dlog * beta_ij(g, h, i, j) + dbeta);
    }
    double dgamma = -0.5 * g.u[k] * h.csch2 - 0.5 * g.v[k] * h.sech2;
    return shg * (dlog * gamma_t(n, g, h) + dgamma);
}

double hermite_riesz_dtau(HermiteRieszKind kind, int n, double tau, std::span<const double> x,
                          std::span<const double> y, int i, int j) {
    if (i > j) std::swap(i, j);
    tau = clamp_tau(tau);
    MehlerGeom g = geom(x, y);
    Hyp h = hyperbolics(tau);
    double shg = std::exp(log_mehler(n, tau, g, h));
    double gam = gamma_t(n, g, h);  // = d_tau log(SHG)
    double c = h.coth, T = h.tanh;
    double cp = -h.csch2;  // d coth / d tau
    double Tp = h.sech2;   // d tanh / d tau
    if (kind == HermiteRieszKind::ij) {
        double d = (i == j) ? 1.0 : 0.0;
        double dbeta = -0.5 * (cp + Tp) * d + 0.5 * c * cp * g.u[i] * g.u[j] +
                       0.25 * (cp * T + c * Tp) * (g.u[i] * g.v[j] + g.u[j] * g.v[i]) +
                       0.5 * T * Tp * g.v[i] * g.v[j];
        return shg * (gam * beta_ij(g, h, i, j) + dbeta);
    }
    double dgamma = 2.0 * n * h.csch2_2t - 0.5 * g.u2 * h.csch2 * c + 0.5 * g.v2 * h.sech2 * T;
    return shg * (gam * gam + dgamma);
}

double poisson_kernel(int n, double s, double height_y, double t, std::span<const double> x) {
    if (!(height_y > 0.0)) throw std::invalid_argument("poisson_kernel: y must be positive");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("poisson_kernel: s must be in (0,1)");
    if (t <= 0.0) return 0.0;
    double log_k = 2.0 * s * std::log(height_y) - s * std::log(4.0) - std::lgamma(s) -
                   height_y * height_y / (4.0 * t) - (1.0 + s) * std::log(t) -
                   0.5 * n * std::log(4.0 * M_PI * t) - norm2sq(x) / (4.0 * t);
    return std::exp(log_k);
}

BoundReport bound_check(BoundKernel id, double exponent_m, const CloudSpec& cloud) {
    if (cloud.points == 0) throw std::invalid_argument("bound_check: empty cloud");
    std::mt19937_64 rng(cloud.seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const int n = cloud.n;
    BoundReport rep;
    rep.exponent_m = exponent_m;
    rep.cloud_points = cloud.points;
    switch (id) {
        case BoundKernel::heat_ij: rep.kernel_id = "heat_ij"; break;
        case BoundKernel::heat_t: rep.kernel_id = "heat_t"; break;
        case BoundKernel::heat_ij_grad: rep.kernel_id = "heat_ij_grad"; break;
        case BoundKernel::heat_ij_dtau: rep.kernel_id = "heat_ij_dtau"; break;
        case BoundKernel::heat_t_grad: rep.kernel_id = "heat_t_grad"; break;
        case BoundKernel::heat_t_dtau: rep.kernel_id = "heat_t_dtau"; break;
        case BoundKernel::hermite_ij: rep.kernel_id = "hermite_ij"; break;
        case BoundKernel::hermite_t: rep.kernel_id = "hermite_t"; break;
        case BoundKernel::hermite_ij_grad: rep.kernel_id = "hermite_ij_grad"; break;
        case BoundKernel::hermite_ij_dtau: rep.kernel_id = "hermite_ij_dtau"; break;
        case BoundKernel::hermite_t_grad: rep.kernel_id = "hermite_t_grad"; break;
        case BoundKernel::hermite_t_dtau: rep.kernel_id = "hermite_t_dtau"; break;
        case BoundKernel::poisson: rep.kernel_id = "poisson"; break;
        case BoundKernel::poisson_x_mass: rep.kernel_id = "poisson_x_mass"; break;
    }

    std::vector<double> x(n), y(n), diff(n);
    const double log_tau_lo = std::log(cloud.tau_min), log_tau_hi = std::log(cloud.tau_max);
    const int ii = 0;
    const int jj = (n > 1) ? 1 : 0;

    for (std::size_t pt = 0; pt < cloud.points; ++pt) {
        double tau = std::exp(log_tau_lo + (log_tau_hi - log_tau_lo) * u01());
        for (int d = 0; d < n; ++d) {
            x[d] = cloud.box * (2.0 * u01() - 1.0);
            y[d] = cloud.box * (2.0 * u01() - 1.0);
        }
        for (int d = 0; d < n; ++d) diff[d] = x[d] - y[d];
        double dist = std::sqrt(norm2sq(diff));
        double height = std::exp(std::log(1e-3) + (std::log(8.0) - std::log(1e-3)) * u01());

        double kval = 0.0;
        double weight = std::pow(std::sqrt(tau) + dist, exponent_m);
        switch (id) {
            case BoundKernel::heat_ij:
                kval = gw_derivative(GwDerivative::d_ij, n, tau, diff, ii, jj);
                break;
            case BoundKernel::heat_t:
                kval = gw_derivative(GwDerivative::d_tau, n, tau, diff);
                break;
            case BoundKernel::heat_ij_grad: {
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    double g = gw_third_derivative(n, tau, diff, ii, jj, k);
                    s += g * g;
                }
                kval = std::sqrt(s);
                break;
            }
            case BoundKernel::heat_ij_dtau:
                kval = gw_dtau_dij(n, tau, diff, ii, jj);
                break;
            case BoundKernel::heat_t_grad: {
                // grad_y d_tau W = grad_y sum_k d_kk W
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    double g = 0.0;
                    for (int l = 0; l < n; ++l) g += gw_third_derivative(n, tau, diff, l, l, k);
                    s += g * g;
                }
                kval = std::sqrt(s);
                break;
            }
            case BoundKernel::heat_t_dtau: {
                double g = 0.0;
                for (int l = 0; l < n; ++l) g += gw_dtau_dij(n, tau, diff, l, l);
                kval = g;
                break;
            }
            case BoundKernel::hermite_ij:
                kval = hermite_riesz_integrand(HermiteRieszKind::ij, n, tau, x, y, ii, jj);
                break;
            case BoundKernel::hermite_t:
                kval = hermite_riesz_integrand(HermiteRieszKind::t, n, tau, x, y);
                break;
            case BoundKernel::hermite_ij_grad: {
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    double g = hermite_riesz_grad(HermiteRieszKind::ij, n, tau, x, y, ii, jj, k);
                    s += g * g;
                }
                kval = std::sqrt(s);
                break;
            }
            case BoundKernel::hermite_ij_dtau:
                kval = hermite_riesz_dtau(HermiteRieszKind::ij, n, tau, x, y, ii, jj);
                break;
            case BoundKernel::hermite_t_grad: {
                double s = 0.0;
                for (int k = 0; k < n; ++k) {
                    double g = hermite_riesz_grad(HermiteRieszKind::t, n, tau, x, y, 0, 0, k);
                    s += g * g;
                }
                kval = std::sqrt(s);
                break;
            }
            case BoundKernel::hermite_t_dtau:
                kval = hermite_riesz_dtau(HermiteRieszKind::t, n, tau, x, y, 0, 0);
                break;
            case BoundKernel::poisson: {
                // the vector-valued kernel: (t, x) plays (tau, diff)
                kval = poisson_kernel(n, cloud.s, height, tau, diff);
                break;
            }
            case BoundKernel::poisson_x_mass: {
                // exact x-integral of (4.1) over R^n against the majorant;
                // formed as exp of the log difference so deep Gaussian tails
                // do not degrade to subnormal quotients
                double log_xint = 2.0 * cloud.s * std::log(height) - cloud.s * std::log(4.0) -
                                  std::lgamma(cloud.s) - height * height / (4.0 * tau) -
                                  (1.0 + cloud.s) * std::log(tau);
                double log_major = 2.0 * cloud.s * std::log(height) -
                                   height * height / (4.0 * tau) -
                                   (1.0 + cloud.s) * std::log(tau);
                kval = std::exp(log_xint - log_major);
                weight = 1.0;
                break;
            }
        }
        double probe = std::abs(kval) * weight;
        if (probe > rep.sup) {
            rep.sup = probe;
            rep.worst_tau = tau;
            rep.worst_x.assign(x.begin(), x.end());
            rep.worst_y.assign(y.begin(), y.end());
            rep.worst_height = height;
        }
    }
    return rep;
}

double psi_comparison_integral(int n, int refine_level) {
    // integral over s in (0,1), |z| in (1, inf) of (|z|+sqrt(s))^{-(n+2)},
    // in polar coordinates: |S^{n-1}| INT r^{n-1} (r+sqrt(s))^{-(n+2)} dr ds
    double sphere = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
    int m = 257 << refine_level;
    auto inner = [&](double s_par) {
        double rs = std::sqrt(s_par);
        // substitute r = 1/v, dr = dv/v^2, v in (0, 1]
        return quadrature::trapezoid(
            [&](double v) {
                if (v <= 0.0) return 0.0;
                double r = 1.0 / v;
                return std::pow(r, n - 1) * std::pow(r + rs, -(n + 2.0)) / (v * v);
            },
            0.0, 1.0, m);
    };
    return sphere * quadrature::trapezoid(inner, 0.0, 1.0, m);
}

}  // namespace parlab::kernels
