#include <doctest.h>

#include <cmath>
#include <complex>

#include "parlab/hermite.hpp"
#include "parlab/kernels.hpp"
#include "parlab/quadrature.hpp"

using namespace parlab;
using namespace parlab::hermite;

TEST_CASE("hermite function values at the origin") {
    CHECK(eval_hermite(0, 0.0) == doctest::Approx(0.75112554446494248).epsilon(1e-14));
    CHECK(eval_hermite(1, 0.0) == doctest::Approx(0.0));
    MultiIndex a00{{0, 0}};
    CHECK(eval_multi(a00, std::vector<double>{0.0, 0.0}) ==
          doctest::Approx(0.56418958354775628).epsilon(1e-13));
    MultiIndex a10{{1, 0}};
    CHECK(eval_multi(a10, std::vector<double>{0.0, 0.7}) == doctest::Approx(0.0));
}

TEST_CASE("orthonormality by quadrature") {
    double norm3 = quadrature::adaptive(
        [](double r) { double h = eval_hermite(3, r); return h * h; }, -12.0, 12.0, 1e-12);
    CHECK(norm3 == doctest::Approx(1.0).epsilon(1e-10));

    // n = 2 tensor quadrature for |alpha|, |beta| <= 4
    Basis b = Basis::make(2, 4);
    int m = 181;
    double R = 9.0, h = 2.0 * R / (m - 1);
    std::vector<std::vector<double>> tab(m);
    for (int i = 0; i < m; ++i) tab[i] = eval_hermite_all(4, -R + i * h);
    for (std::size_t a = 0; a < b.size(); ++a) {
        for (std::size_t c = a; c < b.size(); ++c) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) {
                double wi = (i == 0 || i == m - 1) ? 0.5 : 1.0;
                for (int k = 0; k < m; ++k) {
                    double wk = (k == 0 || k == m - 1) ? 0.5 : 1.0;
                    acc += wi * wk * tab[i][b.indices[a].a[0]] * tab[i][b.indices[c].a[0]] *
                           tab[k][b.indices[a].a[1]] * tab[k][b.indices[c].a[1]];
                }
            }
            acc *= h * h;
            double expected = (a == c) ? 1.0 : 0.0;
            CHECK(acc == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("recurrence stays below the Cramer ceiling") {
    for (int k = 0; k <= 60; ++k) {
        for (double r = -12.0; r <= 12.0; r += 0.08) {
            CHECK(std::abs(eval_hermite(k, r)) <= 1.0);
        }
    }
}

TEST_CASE("projection: orthonormality, linearity, Gaussian") {
    auto h2 = [](std::span<const double> x) { return eval_hermite(2, x[0]); };
    Expansion e = project(h2, 1, 6);
    CHECK(e.box_warning == false);
    for (std::size_t a = 0; a < e.basis.size(); ++a) {
        double expected = (e.basis.indices[a].a[0] == 2) ? 1.0 : 0.0;
        CHECK(e.c[a] == doctest::Approx(expected).epsilon(1e-10));
    }

    auto combo = [](std::span<const double> x) {
        return 3.0 * eval_hermite(0, x[0]) - 2.0 * eval_hermite(1, x[0]);
    };
    Expansion ec = project(combo, 1, 3);
    CHECK(ec.c[e.basis.find(std::vector<int>{0})] == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(ec.c[e.basis.find(std::vector<int>{1})] == doctest::Approx(-2.0).epsilon(1e-11));

    auto gauss = [](std::span<const double> x) { return std::exp(-0.5 * x[0] * x[0]); };
    Expansion eg = project(gauss, 1, 8);
    CHECK(eg.c[0] == doctest::Approx(std::pow(M_PI, 0.25)).epsilon(1e-11));
    for (std::size_t a = 1; a < eg.basis.size(); ++a) CHECK(std::abs(eg.c[a]) <= 1e-9);

    // undersized box sets the warning
    Expansion ew = project(h2, 1, 6, 3.0);
    CHECK(ew.box_warning == true);
}

TEST_CASE("projection then synthesis is the identity on low-degree data") {
    auto f = [](std::span<const double> x) {
        return 0.7 * eval_hermite(0, x[0]) - 1.3 * eval_hermite(4, x[0]) +
               0.25 * eval_hermite(7, x[0]);
    };
    Expansion e = project(f, 1, 9);
    for (double r : {-2.0, -0.3, 0.0, 1.1, 2.7}) {
        CHECK(synthesize(e, std::vector<double>{r}) ==
              doctest::Approx(f(std::vector<double>{r})).epsilon(1e-9));
    }
}

TEST_CASE("spectral semigroup on coefficients") {
    auto h0 = [](std::span<const double> x) { return eval_hermite(0, x[0]); };
    Expansion e = project(h0, 1, 4);
    Expansion et = semigroup_spectral(e, 1.0);
    CHECK(et.c[0] == doctest::Approx(std::exp(-1.0) * e.c[0]).epsilon(1e-12));
    // identity at tau = 0
    Expansion e0 = semigroup_spectral(e, 0.0);
    CHECK(e0.c == e.c);
    // semigroup property is exact in coefficient arithmetic
    Expansion a = semigroup_spectral(semigroup_spectral(e, 0.4), 0.35);
    Expansion bb = semigroup_spectral(e, 0.75);
    for (std::size_t k = 0; k < a.c.size(); ++k)
        CHECK(a.c[k] == doctest::Approx(bb.c[k]).epsilon(1e-13));
}

TEST_CASE("Mehler quadrature reproduces the spectrum") {
    // INT W_tau(x, y) h_a(y) dy = e^{-tau(2|a|+n)} h_a(x)
    for (double tau : {0.1, 1.0}) {
        for (int deg : {0, 2, 4}) {
            for (double x : {0.0, 0.8}) {
                double lhs = quadrature::adaptive(
                    [&](double y) {
                        return kernels::mehler(1, tau, std::vector<double>{x},
                                               std::vector<double>{y}) *
                               eval_hermite(deg, y);
                    },
                    -14.0, 14.0, 1e-12);
                double rhs = std::exp(-tau * (2 * deg + 1)) * eval_hermite(deg, x);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("time multipliers: bounds, partition, inverse") {
    for (double rho : {-30.0, -1.0, 0.0, 0.5, 12.0}) {
        for (int m : {1, 3, 11}) {
            auto st = time_symbol(TimeMultiplier::riesz_t, rho, m);
            auto sh = time_symbol(TimeMultiplier::riesz_H, rho, m);
            auto si = time_symbol(TimeMultiplier::inverse, rho, m);
            CHECK(std::abs(st) <= 1.0 + 1e-15);
            CHECK(std::abs(sh) <= 1.0 + 1e-15);
            CHECK(std::abs(st + sh - 1.0) <= 1e-15);
            // inverse times (i rho + m) is the identity
            std::complex<double> denom(m, rho);
            CHECK(std::abs(si * denom - 1.0) <= 1e-13);
            if (rho == 0.0) {
                CHECK(sh == std::complex<double>(1.0, 0.0));
                CHECK(st == std::complex<double>(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("coefficient ladder: derivative and coordinate multiplication") {
    // d/dx h_1 = sqrt(1/2) h_0 - sqrt(2/2)... check against finite differences
    auto f = [](std::span<const double> x) {
        return 0.9 * eval_hermite(2, x[0]) + 0.4 * eval_hermite(5, x[0]);
    };
    Expansion e = project(f, 1, 7);
    Expansion de = differentiate(e, 0);
    Expansion xe = multiply_coordinate(e, 0);
    double h = 1e-6;
    for (double r : {-1.2, 0.0, 0.9, 2.3}) {
        double fd = (f(std::vector<double>{r + h}) - f(std::vector<double>{r - h})) / (2.0 * h);
        CHECK(synthesize(de, std::vector<double>{r}) == doctest::Approx(fd).epsilon(1e-7));
        CHECK(synthesize(xe, std::vector<double>{r}) ==
              doctest::Approx(r * f(std::vector<double>{r})).epsilon(1e-9));
    }
}

TEST_CASE("grid analysis/synthesis round trip on band-limited data") {
    GridSpec spec;
    spec.n = 1;
    spec.L = 9.0;
    spec.N_x = 181;
    spec.t_min = 0.0;
    spec.t_max = 1.0;
    spec.N_t = 17;
    // f(t, x) = cos(2 pi t) h_2(x) + sin(4 pi t) h_0(x)
    FieldDescriptor d{"fh", [](double t, std::span<const double> x) {
                          return std::cos(2.0 * M_PI * t) * eval_hermite(2, x[0]) +
                                 std::sin(4.0 * M_PI * t) * eval_hermite(0, x[0]);
                      }};
    GridFunction f = sample(d, spec);
    TimeExpansion e = analyze(f, 4);
    GridFunction back = synthesize_grid(e, spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(f.values[i] - back.values[i]));
    CHECK(worst <= 1e-9);
}
