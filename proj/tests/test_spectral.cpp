#include <doctest.h>

#include <cmath>
#include <complex>

#include "parlab/quadrature.hpp"
#include "parlab/spectral.hpp"

using namespace parlab;
using namespace parlab::spectral;

namespace {

GridSpec box(int n = 1, int N = 33) {
    GridSpec s;
    s.n = n;
    s.L = 1.0;
    s.N_x = N;
    s.t_min = 0.0;
    s.t_max = 2.0;
    s.N_t = N;
    return s;
}

}  // namespace

TEST_CASE("transform round trip on the random family") {
    GridSpec s = box();
    GridFunction f = sample(random_family_descriptor(s, 13), s);
    InverseResult back = inverse_transform(transform(f));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(f.values[i] - back.values.values[i]));
    CHECK(worst <= 1e-12);
    CHECK(back.max_imag <= 1e-12);
}

TEST_CASE("single mode maps to one coefficient pair") {
    GridSpec s = box();
    double rho1 = 2.0 * M_PI / (s.t_max - s.t_min);
    double xi1 = M_PI / s.L;
    FieldDescriptor mode{"mode", [&](double t, std::span<const double> x) {
                             return std::cos(rho1 * t + xi1 * x[0]);
                         }};
    SpectralField F = transform(sample(mode, s));
    int nonzero = 0;
    for (const auto& c : F.c)
        if (std::abs(c) > 1e-10) ++nonzero;
    CHECK(nonzero == 2);  // conjugate pair of the real cosine
}

TEST_CASE("real fields have Hermitian coefficient symmetry") {
    GridSpec s = box(1, 17);
    GridFunction f = sample(random_family_descriptor(s, 3), s);
    SpectralField F = transform(f);
    for (int k = 0; k < F.Mt; ++k) {
        for (int m = 0; m < F.Mx; ++m) {
            int kk = (F.Mt - k) % F.Mt;
            int mm = (F.Mx - m) % F.Mx;
            std::complex<double> a = F.c[F.index(k, std::vector<int>{m})];
            std::complex<double> b = F.c[F.index(kk, std::vector<int>{mm})];
            CHECK(std::abs(a - std::conj(b)) <= 1e-12);
        }
    }
}

TEST_CASE("symbol identities") {
    std::vector<double> xi = {0.7, -1.3};
    double rho = 2.1;
    Symbol r00{SymbolKind::riesz_ij, 0, 0};
    Symbol r11{SymbolKind::riesz_ij, 1, 1};
    Symbol rt{SymbolKind::riesz_t};
    auto sum = symbol_value(r00, rho, xi) + symbol_value(r11, rho, xi) +
               symbol_value(rt, rho, xi);
    CHECK(std::abs(sum - 1.0) <= 1e-14);

    // |riesz| <= 1 on a frequency sweep
    for (double r2 : {-20.0, -3.0, 0.0, 0.1, 7.0}) {
        for (double x1 : {0.0, 0.3, 5.0}) {
            std::vector<double> xi1 = {x1};
            if (r2 == 0.0 && x1 == 0.0) continue;
            CHECK(std::abs(symbol_value(Symbol{SymbolKind::riesz_ij, 0, 0}, r2, xi1)) <=
                  1.0 + 1e-14);
            CHECK(std::abs(symbol_value(rt, r2, xi1)) <= 1.0 + 1e-14);
        }
    }

    // frac_power consistency on the principal branch
    Symbol f1{SymbolKind::frac_power};
    f1.s = 1.0;
    auto lam = symbol_value(f1, rho, xi);
    CHECK(std::abs(lam - std::complex<double>(0.7 * 0.7 + 1.3 * 1.3, rho)) <= 1e-13);
    Symbol fs{SymbolKind::frac_power};
    fs.s = 0.3;
    Symbol fc{SymbolKind::frac_power};
    fc.s = 0.7;
    CHECK(std::abs(symbol_value(fs, rho, xi) * symbol_value(fc, rho, xi) - lam) <= 1e-12);
}

TEST_CASE("heat_inverse symbol against direct tau quadrature of (2.9)") {
    // quadrature of INT_0^infty e^{-tau(i + 1)} dtau = 1/(1 + i)
    auto val = quadrature::trapezoid_refine_complex(
        [](double u) {
            double tau = std::exp(u);
            return std::exp(std::complex<double>(-tau, -tau)) * tau;
        },
        -30.0, 8.0, 2001, 1e-12);
    std::complex<double> expected = 1.0 / std::complex<double>(1.0, 1.0);
    CHECK(std::abs(val - expected) <= 1e-10);

    std::vector<double> xi = {2.0};
    CHECK(std::abs(symbol_value(Symbol{SymbolKind::heat_inverse}, 0.0, xi) - 0.25) <= 1e-14);
}

TEST_CASE("apply_symbol: heat_inverse then forward multiplier restores input") {
    GridSpec s = box(1, 17);
    GridFunction f = sample(random_family_descriptor(s, 21), s);
    SpectralField F = transform(f);
    Symbol inv{SymbolKind::heat_inverse};
    ApplyResult G = apply_symbol(F, inv);
    Symbol fwd{SymbolKind::frac_power};
    fwd.s = 1.0;
    ApplyResult H = apply_symbol(G.field, fwd);
    // zero mode was subtracted; compare off the mean
    double mean = G.subtracted_mean;
    InverseResult back = inverse_transform(H.field);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(f.values[i] - mean - back.values.values[i]));
    CHECK(worst <= 1e-11);
}

TEST_CASE("zero-mode policies") {
    GridSpec s = box(1, 9);
    FieldDescriptor one{"one", [](double, std::span<const double>) { return 1.0; }};
    SpectralField F = transform(sample(one, s));
    Symbol rej{SymbolKind::heat_inverse};
    rej.zero_mode = ZeroModePolicy::reject;
    CHECK_THROWS_AS(apply_symbol(F, rej), std::invalid_argument);
    Symbol sub{SymbolKind::heat_inverse};
    ApplyResult G = apply_symbol(F, sub);
    CHECK(G.subtracted_mean == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("poisson symbol: closed form at s = 1/2 and mass limit") {
    Symbol p{SymbolKind::poisson};
    p.s = 0.5;
    p.y = 1.0;
    std::vector<double> xi = {1.0};
    // at rho = 0, |xi|^2 = 1 the subordination of e^{-tau} is e^{-y sqrt(lambda)}
    CHECK(std::abs(symbol_value(p, 0.0, xi) - std::exp(-1.0)) <= 1e-8);
    // the zero mode carries the unit mass identity
    std::vector<double> xi0 = {0.0};
    CHECK(std::abs(symbol_value(p, 0.0, xi0) - 1.0) <= 1e-14);
    // |symbol| <= 1 across the lattice, including pure-time frequencies
    for (double rho : {-12.0, -0.5, 0.5, 40.0}) {
        for (double x1 : {0.0, 1.0, 6.0}) {
            std::vector<double> xx = {x1};
            for (double y : {0.25, 1.0, 4.0}) {
                Symbol q{SymbolKind::poisson};
                q.s = 0.3;
                q.y = y;
                CHECK(std::abs(symbol_value(q, rho, xx)) <= 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("derivative oracle reconstructs the PDE") {
    // riesz_t(f) = sum_i riesz_ii(f) + f for the physical operators
    GridSpec s = box(1, 33);
    GridFunction f = sample(random_family_descriptor(s, 31), s);
    GridFunction dt = derivative_oracle(f, true);
    GridFunction dxx = derivative_oracle(f, false, 0, 0);
    // both symbols vanish at the zero mode, so the identity holds off the mean
    double mean = 0.0;
    std::size_t count = 0;
    for (int j = 0; j < s.N_t - 1; ++j) {
        for (int m = 0; m < s.N_x - 1; ++m) {
            mean += f.at(j, m);
            ++count;
        }
    }
    mean /= count;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        worst = std::max(worst, std::abs(dt.values[i] - dxx.values[i] - (f.values[i] - mean)));
    CHECK(worst <= 1e-10 * (1.0 + sup_abs(f)));
}
