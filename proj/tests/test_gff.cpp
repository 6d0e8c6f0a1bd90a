#include <doctest.h>

#include <cmath>

#include "torus_lqg/gff.hpp"
#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/stats.hpp"
#include "torus_lqg/torus_green.hpp"

using namespace torus_lqg;

TEST_CASE("circle multiplier equals direct theta quadrature")
{
    // average of the plane wave over the metric circle, 256-point trapezoid (spectrally exact here)
    ComplexUH tau(0.3, 1.2);
    const double eps = 0.01;
    double worst = 0.0;
    for (int n = -64; n <= 64; n += 3)
        for (int m = -64; m <= 64; m += 5) {
            cplx s = 0.0;
            for (int q = 0; q < 256; ++q) {
                double th = kTwoPi * q / 256.0;
                // metric circle of radius eps in the x-coordinates
                double dy1 = eps * std::cos(th), dy2 = eps * std::sin(th);
                double x2 = dy2 / tau.im, x1 = dy1 - tau.re * x2;
                s += std::polar(1.0, kTwoPi * (n * x1 + m * x2));
            }
            s /= 256.0;
            worst = std::max(worst, std::abs(s - circle_multiplier(tau, n, m, eps)));
        }
    CHECK(worst < 1e-10);
}

TEST_CASE("free field partition")
{
    CHECK(free_field_partition({0, 1}) == doctest::Approx(1.0 / (0.768225422326056659 * 0.768225422326056659)).epsilon(1e-12));
    ComplexUH t(0.3, 1.7);
    double z = free_field_partition(t);
    CHECK(std::abs(free_field_partition(act_on_uhp(ModularElement::translation(1), t)) - z) < 1e-10 * z);
    CHECK(std::abs(free_field_partition(act_on_uhp(ModularElement::inversion(), t)) - z) < 1e-10 * z);
    // growth like e^{pi Im/6} / sqrt(Im)
    double y = 30.0;
    CHECK(free_field_partition({0, y}) * std::sqrt(y) * std::exp(-kPi * y / 6.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sampled field is real, mean zero and reproducible")
{
    ComplexUH tau(0.1, 1.3);
    RngStream a(7, 3), b(7, 3);
    SpectralField f = sample_gff(tau, 8, a), g = sample_gff(tau, 8, b);
    for (int n = -8; n <= 8; ++n)
        for (int m = -8; m <= 8; ++m) {
            CHECK(f.coeff(n, m) == g.coeff(n, m));
            CHECK(std::abs(f.coeff(-n, -m) - std::conj(f.coeff(n, m))) == 0.0);
        }
    RealGrid grid = f.to_grid();
    double s = 0.0;
    for (double v : grid.values) s += v;
    CHECK(std::abs(s / grid.values.size()) < 1e-14);
    // grid agrees with direct evaluation
    CHECK(grid(5, 9) == doctest::Approx(f.value_at({5.0 / 32, 9.0 / 32})).epsilon(1e-12));
}

TEST_CASE("grid sampler matches spectral field path")
{
    ComplexUH tau(0, 1);
    GffGridSampler s(tau, 12, 48, 0.02);
    RngStream a(1, 0), b(1, 0);
    RealGrid g;
    s.sample(a, g);
    SpectralField f;
    s.sample_field(b, f);
    RealGrid h = f.to_grid(48);
    for (size_t i = 0; i < g.values.size(); ++i) CHECK(g.values[i] == doctest::Approx(h.values[i]).epsilon(1e-12));
    CHECK(s.point_variance() == doctest::Approx(spectral_variance(tau, 12, 0.02)).epsilon(1e-13));
}

TEST_CASE("empirical variance and covariance match the truncated series")
{
    ComplexUH tau(0, 1);
    const int N = 16, G = 64, R = 4000;
    GffGridSampler s(tau, N, G);
    std::vector<double> v0, c1;
    RealGrid g;
    for (int r = 0; r < R; ++r) {
        RngStream rng(11, r);
        s.sample(rng, g);
        v0.push_back(g(0, 0) * g(0, 0));
        c1.push_back(g(0, 0) * g(16, 16));
    }
    auto a = mean_se(v0), b = mean_se(c1);
    CHECK(std::abs(a.mean - spectral_variance(tau, N)) < 3.5 * a.se);
    CHECK(std::abs(b.mean - spectral_covariance(tau, N, {0.25, 0.25})) < 3.5 * b.se);
}

TEST_CASE("circle average")
{
    ComplexUH tau(0, 1);
    RngStream rng(2, 0);
    SpectralField f = sample_gff(tau, 32, rng);
    SpectralField g = circle_average(f, 1e-6);
    double worst = 0.0;
    for (int n = -32; n <= 32; ++n)
        for (int m = -32; m <= 32; ++m) worst = std::max(worst, std::abs(f.coeff(n, m) - g.coeff(n, m)));
    CHECK(worst < 1e-8);
    CHECK_THROWS_AS(circle_average(g, 0.1), Error);
    CHECK_THROWS_AS(circle_average(f, 0.0), Error);

    // variance from multiplied coefficients vs quadrature of the closed form
    const double eps = 0.02;
    const int N = 600;  // tail of c J0^2 is about 1/(2 pi^2 eps N)
    double spec = spectral_variance(tau, N, eps);
    double quad = green_regularized(tau, {0, 0}, eps, 96);
    CHECK(std::abs(spec - quad) < 1.5 / (2 * kPi * kPi * eps * N));
    // variance + ln eps approaches Theta along a dyadic ladder
    double prev = 1e9;
    for (double e : {0.04, 0.02, 0.01}) {
        double d = std::abs(green_regularized(tau, {0, 0}, e, 96) + std::log(e) - theta_const(tau));
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("log-conformal factor and Dirichlet energy")
{
    LogConformalFactor spec;
    spec.entries = {{1, 0, {0.3, 0.1}}, {0, 1, {-0.2, 0.05}}, {2, -1, {0.1, 0.0}}, {1, 1, {0.0, 0.07}}};
    ComplexUH tau(0.2, 1.1);
    SpectralField f = build_log_conformal_factor(spec, tau, 6);
    double e_coef = dirichlet_energy_coefficients(f);
    double e_grid = dirichlet_energy_grid(f);
    double expect = 0.0;
    for (auto& e : spec.entries) expect += 2.0 * std::norm(e.value);  // each entry is one +- pair
    CHECK(e_coef == doctest::Approx(kTwoPi * expect).epsilon(1e-12));
    CHECK(std::abs(e_coef - e_grid) < 1e-6);

    // same energy at an equivalent modulus
    ComplexUH t2 = act_on_uhp(ModularElement::inversion(), tau);
    SpectralField f2 = build_log_conformal_factor(spec, t2, 6);
    CHECK(std::abs(dirichlet_energy_coefficients(f2) - e_coef) < 1e-10);

    CHECK(dirichlet_energy_coefficients(build_log_conformal_factor({}, tau, 4)) == 0.0);

    // relabelling can leave the cutoff
    ComplexUH far = act_on_uhp(ModularElement(5, 2, 2, 1), ComplexUH(0.1, 1.5));
    LogConformalFactor big;
    big.entries = {{3, 3, {0.1, 0.0}}};
    CHECK_THROWS_AS(build_log_conformal_factor(big, far, 4), Error);
}
