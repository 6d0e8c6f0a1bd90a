#include <doctest.h>

#include <cmath>

#include "torus_lqg/modular_group.hpp"
#include "torus_lqg/special_fn.hpp"

using namespace torus_lqg;

namespace {
// grid over the closed fundamental domain, Im tau up to 3
std::vector<ComplexUH> domain_grid(int nu, int ny)
{
    std::vector<ComplexUH> out;
    for (int i = 0; i < nu; ++i) {
        double u = -0.5 + i / double(nu - 1);
        double y0 = std::sqrt(1.0 - u * u);
        for (int j = 0; j < ny; ++j) out.emplace_back(u, y0 + (3.0 - y0) * j / double(ny - 1));
    }
    return out;
}
}  // namespace

TEST_CASE("eta at i matches Gamma(1/4)/(2 pi^{3/4})")
{
    // reference from the closed form, independent of any q-series
    const double ref = std::tgamma(0.25) / (2.0 * std::pow(kPi, 0.75));
    cplx e = dedekind_eta({0.0, 1.0}, {1e-14, 1000});
    CHECK(std::abs(e.real() - ref) < 2e-14);
    CHECK(std::abs(e.real() - 0.7682254223260566) < 2e-15);
    CHECK(std::abs(e.imag()) < 1e-16);
}

TEST_CASE("eta high-precision reference values")
{
    // 30-digit reference values computed outside this code base
    CHECK(std::abs(dedekind_eta({0.0, 2.0}) - cplx(0.592382781332415885, 0.0)) < 1e-14);
    CHECK(std::abs(dedekind_eta({0.3, 1.7}) - cplx(0.638816796107290026, 0.0502619319544848887)) < 1e-14);
}

TEST_CASE("eta series and product paths agree")
{
    for (auto t : domain_grid(7, 5)) CHECK(std::abs(dedekind_eta(t) - dedekind_eta_product(t)) < 1e-13);
    ComplexUH small(0.2, 0.05);
    CHECK(std::abs(dedekind_eta(small) - dedekind_eta_product(small)) < 1e-12);
}

TEST_CASE("eta tolerance refinement")
{
    for (double y : {0.05, 0.1, 0.5, 1.0, 2.5}) {
        for (double t : {1e-6, 1e-9, 1e-12}) {
            ComplexUH tau(0.17, y);
            cplx a = dedekind_eta(tau, {t, 100000});
            cplx b = dedekind_eta(tau, {t / 100, 100000});
            CHECK(std::abs(a - b) <= t);
        }
    }
}

TEST_CASE("eta transformation laws on the fundamental domain")
{
    double worst = 0.0;
    for (auto t : domain_grid(10, 10)) {
        cplx e = dedekind_eta(t);
        cplx et = dedekind_eta({t.re + 1.0, t.im});
        worst = std::max(worst, std::abs(et - std::exp(cplx(0, kPi / 12)) * e));
        ComplexUH inv = act_on_uhp(ModularElement::inversion(), t);
        cplx ei = dedekind_eta(inv);
        worst = std::max(worst, std::abs(ei - std::sqrt(t.value() / cplx(0, 1)) * e));
    }
    CHECK(worst < 1e-10);
    // tau = i is the inversion fixed point
    cplx e = dedekind_eta({0, 1});
    CHECK(std::abs(dedekind_eta(act_on_uhp(ModularElement::inversion(), {0, 1})) - e) < 1e-15);
}

TEST_CASE("eta rejects tiny imaginary part")
{
    CHECK_THROWS_AS(dedekind_eta({0.0, 5e-4}), Error);
    QSeriesConfig tight{1e-15, 3};
    try {
        dedekind_eta({0.0, 0.01}, tight);
        FAIL("expected NonConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvergence);
    }
}

TEST_CASE("theta1 basic properties")
{
    ComplexUH tau(0.1, 1.3);
    CHECK(std::abs(theta1(0.0, tau)) < 1e-16);
    cplx z(0.27, 0.11);
    CHECK(std::abs(theta1(-z, tau) + theta1(z, tau)) < 1e-14);
    // reference value (independent implementation)
    CHECK(std::abs(theta1({0.3, 0.1}, {0, 2}) - cplx(0.353091039272346398, 0.0780439478007945144)) < 1e-14);
    CHECK(std::abs(theta1({0.3, 0.1}, {0, 2}) - theta1({0.3, 0.1}, {0, 2}, {}, Theta1Path::Product)) < 1e-12);
}

TEST_CASE("theta1 series and product agree in the strip")
{
    double worst = 0.0;
    for (auto t : domain_grid(5, 4))
        for (double a : {0.0, 0.13, 0.41, 0.77})
            for (double f : {-1.0, -0.5, 0.0, 0.6, 1.0}) {
                cplx z(a, f * t.im / 4);
                worst = std::max(worst, std::abs(theta1(z, t) - theta1(z, t, {}, Theta1Path::Product)));
            }
    CHECK(worst < 1e-10);
}

TEST_CASE("theta1 derivative at zero equals 2 pi eta^3")
{
    double worst = 0.0;
    for (auto t : domain_grid(10, 10)) {
        cplx e = dedekind_eta(t);
        worst = std::max(worst, std::abs(theta1_z_derivative_at_zero(t) - kTwoPi * e * e * e));
    }
    CHECK(worst < 1e-10);
    cplx d = theta1_z_derivative_at_zero({0, 1});
    CHECK(d.real() > 0);
    CHECK(std::abs(d.imag()) < 1e-15);
    CHECK(std::abs(d.real() - kTwoPi * std::pow(0.7682254223260566, 3)) < 1e-13);
    CHECK(std::abs(std::abs(theta1_z_derivative_at_zero({1, 1})) - d.real()) < 1e-13);
    // finite difference cross-check
    ComplexUH t(0.2, 1.1);
    double h = 1e-5;
    cplx fd = (theta1(h, t) - theta1(-h, t)) / (2 * h);
    CHECK(std::abs(fd - theta1_z_derivative_at_zero(t)) < 1e-8);
}

TEST_CASE("auxiliary thetas")
{
    ComplexUH t(0.0, 1.5);
    cplx t2 = theta_aux(2, t), t3 = theta_aux(3, t), t4 = theta_aux(4, t);
    CHECK(std::abs(std::pow(t2, 4) + std::pow(t4, 4) - std::pow(t3, 4)) < 1e-12);
    CHECK(std::abs(theta_aux(3, {0, 1}).real() - 1.08643481121330801) < 1e-14);
    // pi^{1/4}/Gamma(3/4)
    CHECK(std::abs(theta_aux(3, {0, 1}).real() - std::pow(kPi, 0.25) / std::tgamma(0.75)) < 1e-14);
    for (int k : {2, 3, 4}) CHECK(std::abs(theta_aux(k, {0, 0.7}).imag()) < 1e-16);
    ComplexUH g(0.31, 0.9);
    cplx a = theta_aux(2, g), b = theta_aux(3, g), c = theta_aux(4, g);
    CHECK(std::abs(std::pow(a, 4) + std::pow(c, 4) - std::pow(b, 4)) < 1e-12);
    // theta2 theta3 theta4 = 2 eta^3
    cplx e = dedekind_eta(g);
    CHECK(std::abs(a * b * c - 2.0 * e * e * e) < 1e-12);
    CHECK_THROWS_AS(theta_aux(1, g), Error);
}

TEST_CASE("variance offset at i")
{
    CHECK(std::abs(theta_const({0, 1}) - (-1.31053292591150952)) < 1e-13);
}
