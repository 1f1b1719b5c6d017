#include <doctest.h>

#include <cmath>

#include "fidsim/quadrature.hpp"

using namespace fidsim;

TEST_CASE("standard integrals to tolerance") {
    auto I1 = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                               M_PI, 1e-11);
    CHECK(I1 == doctest::Approx(2.0).epsilon(1e-10));

    auto I2 = adaptive_simpson([](double x) { return 1.0 / (1.0 + x * x); },
                               0.0, 1.0, 1e-11);
    CHECK(I2 == doctest::Approx(M_PI / 4.0).epsilon(1e-10));

    auto I3 = adaptive_simpson([](double x) { return std::exp(-x); }, 0.0,
                               30.0, 1e-11, 1.0);
    CHECK(I3 == doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-10));
}

TEST_CASE("simpson is exact on cubics") {
    auto I = adaptive_simpson([](double x) { return x * x * x; }, 0.0, 1.0,
                              1e-6);
    CHECK(std::abs(I - 0.25) <= 1e-14);
}

TEST_CASE("empty and reversed intervals") {
    auto I = adaptive_simpson([](double x) { return x; }, 2.0, 2.0, 1e-10);
    CHECK(I == 0.0);
}

TEST_CASE("panel pre-splitting resolves fast oscillations") {
    // sin^2(50x) vanishes at every multiple of pi/50; the naive 5-point
    // start sees only zeros on [0, 2pi] without panels
    auto f = [](double x) {
        double s = std::sin(50.0 * x);
        return s * s;
    };
    auto I = adaptive_simpson(f, 0.0, 2.0 * M_PI, 1e-10, M_PI / 50.0);
    CHECK(I == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("tolerance scales the achieved error") {
    auto f = [](double x) { return std::cos(3.0 * x) * std::exp(-0.2 * x); };
    // exact antiderivative of exp(ax) cos(bx): a = -0.2, b = 3
    auto F = [](double x) {
        double a = -0.2, b = 3.0;
        return std::exp(a * x) * (a * std::cos(b * x) + b * std::sin(b * x)) /
               (a * a + b * b);
    };
    double exact = F(5.0) - F(0.0);

    auto loose = adaptive_simpson(f, 0.0, 5.0, 1e-6, 0.5);
    auto tight = adaptive_simpson(f, 0.0, 5.0, 1e-12, 0.5);
    CHECK(std::abs(loose - exact) <= 1e-6);
    CHECK(std::abs(tight - exact) <= 1e-11);
}

TEST_CASE("integrand with a step still converges") {
    auto f = [](double x) { return x < 0.3 ? 1.0 : 2.0; };
    auto I = adaptive_simpson(f, 0.0, 1.0, 1e-8, 0.1);
    CHECK(I == doctest::Approx(1.7).epsilon(1e-6));
}
