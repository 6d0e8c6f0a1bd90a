#include <doctest.h>

#include <cmath>
#include <random>

#include "torus_lqg/rng.hpp"
#include "torus_lqg/stats.hpp"

using namespace torus_lqg;

TEST_CASE("Kolmogorov survival function")
{
    // reference values of the limit law
    CHECK(kolmogorov_sf(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-12));
    CHECK(kolmogorov_sf(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(kolmogorov_sf(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-12));
    // both branches agree where they meet
    CHECK(kolmogorov_sf(0.2999999) == doctest::Approx(kolmogorov_sf(0.3000001)).epsilon(1e-6));
    CHECK(kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("KS tests accept the right law and reject the wrong one")
{
    RngStream rng(1, 0);
    std::vector<double> x, y, z;
    for (int i = 0; i < 3000; ++i) {
        x.push_back(rng.gamma(2.0, 3.0));
        y.push_back(rng.gamma(2.0, 3.0));
        z.push_back(rng.gamma(2.0, 2.5));
    }
    CHECK(ks_one_sample(x, [](double v) { return gamma_cdf(v, 2.0, 3.0); }).p_value > 0.01);
    CHECK(ks_one_sample(z, [](double v) { return gamma_cdf(v, 2.0, 3.0); }).p_value < 0.01);
    CHECK(ks_two_sample(x, y).p_value > 0.01);
    CHECK(ks_two_sample(x, z).p_value < 0.01);
    // unit weights reproduce the plain test
    std::vector<double> w(3000, 2.0);
    auto a = ks_two_sample(x, y), b = ks_two_sample_weighted(x, w, y, w);
    CHECK(a.D == b.D);
    CHECK(b.n_eff == doctest::Approx(1500.0));
}

TEST_CASE("gamma sampler moments")
{
    RngStream rng(2, 0);
    std::vector<double> v;
    for (int i = 0; i < 20000; ++i) v.push_back(rng.gamma(0.6, 2.0));
    auto m = mean_se(v);
    CHECK(std::abs(m.mean - 0.3) < 4 * m.se);
}

TEST_CASE("chi-square goodness of fit")
{
    std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
    CHECK(chi_square_gof({100, 200, 300, 400}, p).statistic == 0.0);
    CHECK(chi_square_gof({100, 200, 300, 400}, p).dof == 3);
    CHECK(chi_square_gof({400, 300, 200, 100}, p).p_value < 1e-10);
    // pooling of sparse cells
    auto r = chi_square_gof({1, 0, 2, 97}, {0.01, 0.01, 0.01, 0.97});
    CHECK(r.dof == 0);
    CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("median and correlation")
{
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    auto c = pearson({1, 2, 3, 4}, {2, 4, 6, 8});
    CHECK(c.r == doctest::Approx(1.0));
}
