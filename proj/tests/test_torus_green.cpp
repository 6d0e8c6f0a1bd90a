#include <doctest.h>

#include <cmath>
#include <random>

#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/torus_green.hpp"

using namespace torus_lqg;

TEST_CASE("green reference values")
{
    // computed independently with a 30-digit theta implementation
    CHECK(green({0, 1}, {0.3, 0.4}) == doctest::Approx(-0.265318765476258875).epsilon(1e-13));
    CHECK(green({0.5, 0.9}, {0.1, 0.7}) == doctest::Approx(0.0481663295774685012).epsilon(1e-12));
}

TEST_CASE("green symmetry and periodicity")
{
    ComplexUH tau(1.0, 2.0);
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> U(0.02, 0.98);
    for (int i = 0; i < 50; ++i) {
        TorusPoint x(U(g), U(g));
        CHECK(std::abs(green(tau, x) - green(tau, -x)) < 1e-10);
    }
    ComplexUH t2(0.2, 1.1);
    for (int i = 0; i < 20; ++i) {
        double a = U(g), b = U(g);
        // the closed form is evaluated on any representative via the regular part
        CHECK(std::abs(green(t2, TorusPoint(a, b)) - green(t2, TorusPoint(a + 1.0, b))) < 1e-10);
        CHECK(std::abs(green(t2, TorusPoint(a, b)) - green(t2, TorusPoint(a, b - 1.0))) < 1e-10);
        // raw formula with x2 shifted by one is the same value
        double x2 = b + 1.0;
        cplx z = to_complex(t2, a, x2);
        double raw = kPi * t2.im * x2 * x2 - std::log(std::abs(theta1(z, t2) / dedekind_eta(t2)));
        CHECK(std::abs(raw - green(t2, TorusPoint(a, b))) < 1e-10);
    }
    CHECK_THROWS_AS(green(tau, {0.0, 0.0}), Error);
}

TEST_CASE("closed form vs eigen series")
{
    GreenEvalConfig eig{GreenMode::EigenSeries, 400, 5e-3};
    double ge = green({0, 1}, {0.3, 0.4}, eig);
    CHECK(std::abs(ge - green({0, 1}, {0.3, 0.4})) < 5e-3);
    // the reported estimate bounds the actual error at a few points
    for (auto x : {TorusPoint(0.3, 0.4), TorusPoint(0.1, 0.05), TorusPoint(0.5, 0.5)}) {
        double err = std::abs(green({0.2, 1.1}, x, eig) - green({0.2, 1.1}, x));
        CHECK(err <= 3 * green_eigen_error_estimate({0.2, 1.1}, x, 400));
    }
    GreenEvalConfig tight{GreenMode::EigenSeries, 50, 1e-8};
    CHECK_THROWS_AS(green({0, 1}, {0.3, 0.4}, tight), Error);
}

TEST_CASE("closed form vs appendix series")
{
    GreenEvalConfig app{GreenMode::AppendixSeries, 0, 1e-13};
    double worst = 0.0;
    for (ComplexUH t : {ComplexUH(0, 1), ComplexUH(0.4, 0.95), ComplexUH(-0.3, 2.2), ComplexUH(0.1, 0.6)})
        for (double a : {0.0, 0.21, 0.5, 0.83})
            for (double b : {0.01, 0.3, 0.5, 0.77, 0.99}) {
                TorusPoint x(a, b);
                worst = std::max(worst, std::abs(green(t, x, app) - green(t, x)));
            }
    CHECK(worst < 1e-8);
    try {
        green({0, 1}, {0.3, 0.0}, app);
        FAIL("expected NonConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvergence);
    }
}

TEST_CASE("short distance constant")
{
    // G + ln|p| -> Theta(tau) at the diagonal; Richardson in h^2
    ComplexUH tau(0.3, 1.2);
    auto f = [&](double h) {
        TorusPoint x = from_complex(tau, std::polar(h, 0.7));
        return green(tau, x) + std::log(h);
    };
    double h = 1e-3;
    double rich = (4 * f(h / 2) - f(h)) / 3;
    CHECK(std::abs(rich - theta_const(tau)) < 1e-9);
    cplx e = dedekind_eta(tau);
    double ref = std::log(std::abs(e)) - std::log(std::abs(theta1_z_derivative_at_zero(tau)));
    CHECK(std::abs(ref - theta_const(tau)) < 1e-13);
    CHECK(std::abs(green_regular_part(tau, {0, 0}) - theta_const(tau)) < 1e-14);
    CHECK(std::abs(green_regular_part(tau, from_complex(tau, {1e-9, 0})) - theta_const(tau)) < 1e-12);
}

TEST_CASE("mean zero")
{
    CHECK(std::abs(green_mean_zero_check({0, 1}, 256)) < 1e-3);
    CHECK(std::abs(green_mean_zero_check({0.5, 0.9}, 256)) < 1e-3);
    CHECK(std::abs(green_mean_zero_check({0.5, 0.9}, 512)) < std::abs(green_mean_zero_check({0.5, 0.9}, 128)));
}

TEST_CASE("regularized green")
{
    ComplexUH tau(0, 1);
    double eps = 1e-3;
    double v = green_regularized(tau, {0, 0}, eps);
    CHECK(std::abs(v + std::log(eps) - theta_const(tau)) < 1e-2);
    // far from the diagonal
    TorusPoint x(0.3, 0.4);
    CHECK(std::abs(green_regularized(tau, x, 1e-4) - green(tau, x)) < 1e-6);
    // diagonal value independent of the base point
    for (auto p : {TorusPoint(0.13, 0.77), TorusPoint(0.5, 0.5), TorusPoint(0.999, 0.001)}) {
        double d = green_regularized_pair(tau, p, p, eps);
        CHECK(std::abs(d - v) < 1e-8);
    }
    // spectral accuracy of the trapezoid in the remainder
    CHECK(std::abs(green_regularized({0.2, 0.9}, {0.001, 0.0005}, 0.002, 32) -
                   green_regularized({0.2, 0.9}, {0.001, 0.0005}, 0.002, 96)) < 1e-10);
}

TEST_CASE("modular invariance")
{
    std::vector<TorusPoint> pts;
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (int i = 0; i < 50; ++i) pts.emplace_back(U(g), U(g));
    CHECK(modular_invariance_residual({0.2, 1.3}, ModularElement::identity(), pts) == 0.0);
    CHECK(modular_invariance_residual({0, 1}, ModularElement::translation(1), pts) < 1e-9);
    CHECK(modular_invariance_residual({0, 2}, ModularElement::inversion(), pts) < 1e-9);
    CHECK(modular_invariance_residual({0.3, 0.9}, ModularElement(2, 1, 1, 1), pts) < 1e-9);
}

TEST_CASE("fourier coefficient relabelling")
{
    double worst = 0.0;
    for (ModularElement p : {ModularElement::inversion(), ModularElement::translation(1), ModularElement(2, 1, 1, 1),
                             ModularElement(1, -2, 1, -1)})
        for (ComplexUH t : {ComplexUH(0, 1), ComplexUH(0.3, 0.8), ComplexUH(-0.1, 2.0)})
            for (long n = -5; n <= 5; ++n)
                for (long m = -5; m <= 5; ++m) {
                    if (n == 0 && m == 0) continue;
                    auto nm = dual_index(p, n, m);
                    double lhs = green_coefficient(act_on_uhp(p, t), n, m);
                    double rhs = green_coefficient(t, nm[0], nm[1]);
                    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
                }
    CHECK(worst < 1e-12);
}
