#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "torus_lqg/moduli_lqg.hpp"
#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/stats.hpp"

using namespace torus_lqg;

TEST_CASE("KPZ central charge relation")
{
    CHECK(gamma_from_central_charge(0.0) == doctest::Approx(std::sqrt(8.0 / 3)).epsilon(1e-15));
    CHECK(gamma_from_central_charge(0.5) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(gamma_from_central_charge(1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(gamma_from_central_charge(-2.0) < std::sqrt(8.0 / 3));
    CHECK_THROWS_AS(gamma_from_central_charge(1.01), Error);
}

TEST_CASE("alpha from matter weight")
{
    CHECK(alpha_from_matter_weight(0.0, 2.5) == doctest::Approx(1.0).epsilon(1e-14));
    double g = std::sqrt(8.0 / 3);
    CHECK(alpha_from_matter_weight(0.0, background_charge(g)) == doctest::Approx(g).epsilon(1e-14));
    CHECK(std::abs(alpha_from_matter_weight(1.0, 2.5)) < 1e-14);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-0.2, 0.99);
    for (int i = 0; i < 100; ++i) {
        double d = U(rng), Q = 2.2 + 1.3 * (U(rng) + 0.2) / 1.19;
        double a = alpha_from_matter_weight(d, Q);
        CHECK(a < Q);
        CHECK(std::abs(0.5 * a * (Q - 0.5 * a) + d - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(alpha_from_matter_weight(0.0, 1.5), Error);  // Q^2 < 4
    CHECK_THROWS_AS(alpha_from_matter_weight(0.0, 2.0), Error);  // double root on the bound
}

TEST_CASE("ghost and matter partition functions")
{
    const double eta_i = 0.768225422326056659;
    CHECK(ghost_partition({0, 1}) == doctest::Approx(std::pow(eta_i, 4) / 2).epsilon(1e-13));
    CHECK(ghost_partition({0, 1}) == doctest::Approx(0.17414).epsilon(1e-4));
    // Z_ghost Im^2 is the modular invariant combination
    ComplexUH t(0.3, 1.7);
    auto inv = [](ComplexUH x) { return ghost_partition(x) * x.im * x.im; };
    for (auto psi : {ModularElement::translation(1), ModularElement::inversion()}) {
        ComplexUH p = act_on_uhp(psi, t);
        CHECK(std::abs(inv(p) - inv(t)) < 1e-10);
    }
    // the product Z_ghost Im Z_FF^2 is 1/(2 Im), not an invariant
    CHECK(ghost_partition(t) * t.im * std::pow(free_field_partition(t), 2) == doctest::Approx(1 / (2 * t.im)));
    // decay
    double y = 25.0;
    CHECK(ghost_partition({0, y}) * 2 * y * std::exp(kPi * y / 3) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(matter_partition(MatterCFT::pure_gravity(), t) == 1.0);
    CHECK(matter_partition(MatterCFT::free_field_power(1.0), t) == doctest::Approx(free_field_partition(t)));
    double z = matter_partition(MatterCFT::ising(), t);
    CHECK(z > 0.0);
    for (auto psi : {ModularElement::translation(1), ModularElement::inversion()})
        CHECK(std::abs(matter_partition(MatterCFT::ising(), act_on_uhp(psi, t)) - z) < 1e-8);
}

TEST_CASE("matter parsing and setup")
{
    CHECK(parse_matter("pure").kind == MatterKind::PureGravity);
    CHECK(parse_matter("ising").central_charge == 0.5);
    CHECK(parse_matter("ffpower:-2").central_charge == -2.0);
    CHECK(parse_matter(parse_matter("ffpower:0.25").name()).central_charge == 0.25);
    CHECK_THROWS_AS(parse_matter("ffpower:x"), Error);
    CHECK_THROWS_AS(parse_matter("potts"), Error);
    auto s = make_modulus_setup(MatterCFT::pure_gravity(), 1.0, 1);
    CHECK(s.params.gamma == doctest::Approx(std::sqrt(8.0 / 3)));
    CHECK(s.ins.points[0].alpha == doctest::Approx(s.params.gamma).epsilon(1e-14));
    CHECK(make_modulus_setup(MatterCFT::ising(), 1.0, 3).ins.points.size() == 3);
    try {
        make_modulus_setup(MatterCFT::free_field_power(1.0), 1.0, 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidCentralCharge);
        CHECK(std::string(e.what()).find("Seiberg") != std::string::npos);
    }
}

TEST_CASE("moment cache round trip")
{
    auto dir = std::filesystem::temp_directory_path() / "torus_lqg_cache_test";
    std::filesystem::remove_all(dir);
    MomentCache c(dir.string());
    auto s = make_modulus_setup(MatterCFT::pure_gravity(), 1.0, 1);
    std::string k1 = MomentCache::key(s, {0, 1.5}), k2 = MomentCache::key(s, {0, 1.6});
    CHECK(k1 != k2);
    CHECK(k1.size() == 16);
    CHECK(!c.lookup(k1));
    c.store({k1, 0, 1.5, 0.7, 0.01, 100});
    c.store({k2, 0, 1.6, 0.8, 0.02, 100});
    MomentCache c2(dir.string());
    auto r = c2.lookup(k1);
    REQUIRE(r);
    CHECK(r->moment == 0.7);
    CHECK(c2.size() == 2);
    // mu does not enter the moment
    auto s2 = make_modulus_setup(MatterCFT::pure_gravity(), 3.0, 1);
    CHECK(MomentCache::key(s2, {0, 1.5}) == k1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("density table, sampler and joint law")
{
    auto s = make_modulus_setup(MatterCFT::pure_gravity(), 1.0, 1);
    s.disc = {8, 32};
    s.mc.replicas = 300;
    s.grid_u = 6;
    s.grid_v = 7;
    CHECK_THROWS_AS(modulus_density(s, {0, 0.9}), Error);
    auto d = modulus_density(s, {0.1, 1.3});
    CHECK(d.value > 0.0);
    CHECK(d.se > 0.0);

    auto T = DensityTable::build(s);
    CHECK(T.tail_mass() < 1e-3);
    CHECK(T.tail_mass() > 1e-5);
    double sum = 0.0;
    for (double p : T.cell_probabilities()) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // nodes span the domain
    CHECK(T.tau(0, 0).re == -0.5);
    CHECK(T.tau(0, 0).im == doctest::Approx(std::sqrt(0.75)));
    CHECK(T.tau(5, 6).im == doctest::Approx(10.0));

    RngStream rng(1, 0);
    auto taus = sample_modulus(T, 4000, rng);
    std::vector<double> counts(T.cell_probabilities().size(), 0.0);
    for (auto t : taus) {
        CHECK(in_fundamental_domain(t, 1e-12));
        int c = T.cell_of(t);
        REQUIRE(c >= 0);
        counts[c] += 1.0;
    }
    auto chi = chi_square_gof(counts, T.cell_probabilities());
    CHECK(chi.p_value > 0.001);

    // shorter table: the tail is too heavy
    auto s3 = s;
    s3.t_max = 4.0;
    auto T3 = DensityTable::build(s3);
    CHECK(T3.tail_mass() > 1e-3);
    CHECK_THROWS_AS(sample_modulus(T3, 10, rng), Error);

    auto joint = joint_law_sampler(s, T, 300, 5);
    for (auto& j : joint) CHECK(j.measure_mass == doctest::Approx(j.volume).epsilon(1e-12));
}
