#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "parlab/simd.hpp"

using namespace parlab;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return v;
}

double ulp_distance(double a, double b) {
    if (a == b) return 0.0;
    double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / (scale * std::numeric_limits<double>::epsilon());
}

}  // namespace

TEST_CASE("active lane is registered") {
    std::string name = simd::active_name();
    CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("vexp matches std::exp across the working range") {
    const auto& ops = simd::active();
    auto in = random_vec(100003, 42, -700.0, 60.0);
    std::vector<double> out(in.size());
    ops.vexp(in.data(), out.data(), in.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        worst = std::max(worst, ulp_distance(out[i], std::exp(in[i])));
    }
    CHECK(worst <= 4.0);  // a few ulp between lanes
}

TEST_CASE("vexp edge behavior") {
    const auto& ops = simd::active();
    double in[4] = {-760.0, 0.0, 1.0, -0.5};
    double out[4];
    ops.vexp(in, out, 4);
    CHECK(out[0] <= 1e-300);  // flushed tail
    CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out[2] == doctest::Approx(M_E).epsilon(1e-15));
    CHECK(out[3] == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("simd and scalar lanes agree on reductions") {
    const auto& scalar = simd::scalar_ops;
    const auto& active = simd::active();
    for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(4), std::size_t(17),
                          std::size_t(64), std::size_t(1001)}) {
        auto a = random_vec(n, 7 + n, -1.0, 1.0);
        auto b = random_vec(n, 11 + n, -1.0, 1.0);
        auto c = random_vec(n, 13 + n, -1.0, 1.0);
        double mag = 0.0;
        for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
        CHECK(std::abs(active.dot(a.data(), b.data(), n) - scalar.dot(a.data(), b.data(), n)) <=
              1e-14 * (mag + 1.0));
        CHECK(std::abs(active.dot3(a.data(), b.data(), c.data(), n) -
                       scalar.dot3(a.data(), b.data(), c.data(), n)) <= 1e-14 * (mag + 1.0));
        CHECK(std::abs(active.sum(a.data(), n) - scalar.sum(a.data(), n)) <= 1e-13);
        CHECK(active.abs_max(a.data(), n) == scalar.abs_max(a.data(), n));

        auto y1 = random_vec(n, 17 + n, -1.0, 1.0);
        auto y2 = y1;
        active.axpy(0.37, a.data(), y1.data(), n);
        scalar.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));
    }
}

TEST_CASE("vexp equivalence between lanes") {
    const auto& scalar = simd::scalar_ops;
    const auto& active = simd::active();
    auto in = random_vec(4099, 23, -300.0, 30.0);
    std::vector<double> o1(in.size()), o2(in.size());
    active.vexp(in.data(), o1.data(), in.size());
    scalar.vexp(in.data(), o2.data(), in.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) worst = std::max(worst, ulp_distance(o1[i], o2[i]));
    CHECK(worst <= 4.0);
}

TEST_CASE("reduction result does not depend on repetition") {
    auto a = random_vec(9973, 3, -1e6, 1e6);
    const auto& ops = simd::active();
    double s1 = ops.sum(a.data(), a.size());
    double s2 = ops.sum(a.data(), a.size());
    CHECK(s1 == s2);
}
