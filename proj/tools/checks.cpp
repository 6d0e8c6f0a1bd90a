#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "torus_lqg/gff.hpp"
#include "torus_lqg/gmc.hpp"
#include "torus_lqg/lqft.hpp"
#include "torus_lqg/moduli_lqg.hpp"
#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/stats.hpp"
#include "torus_lqg/torus_green.hpp"

namespace torus_lqg::cli {

using nlohmann::json;

namespace {

struct Spec {
    const char* title;
    double limit;  // seconds
};

const Spec kSpecs[kCheckCount] = {
    {"special-function identities", 5},
    {"Green function triple oracle", 60},
    {"modular invariance of G", 10},
    {"Theta extraction", 120},
    {"GFF covariance", 120},
    {"subcritical GMC", 300},
    {"GMC modular pushforward", 300},
    {"critical chaos", 600},
    {"KPZ scaling", 60},
    {"modular covariance of Pi", 600},
    {"Seiberg gating", 60},
    {"Weyl anomaly", 30},
    {"volume law", 900},
    {"modulus-law reduction", 900},
    {"determinism", 60},
};

std::string fmt(const char* f, double a)
{
    char b[96];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

std::string fmt(const char* f, double a, double b2)
{
    char b[128];
    std::snprintf(b, sizeof b, f, a, b2);
    return b;
}

// runs body(state, r) for r in [0, count); one state per worker, contiguous blocks
template <class Make, class Body>
void par_blocks(int count, int threads, Make make, Body body)
{
    const int W = std::max(1, std::min(threads, count));
    parallel_for(W, W, [&](int w) {
        auto st = make();
        const int lo = int(int64_t(count) * w / W), hi = int(int64_t(count) * (w + 1) / W);
        for (int r = lo; r < hi; ++r) body(st, r);
    });
}

void logf(const CheckOptions& o, const std::string& s)
{
    static std::mutex mu;
    if (!o.log) return;
    std::lock_guard<std::mutex> g(mu);
    *o.log << "    " << s << "\n" << std::flush;
}

struct Outcome {
    bool pass = true;
    std::string summary;
    json stats = json::object();
};

// ---- 1
Outcome special_functions(const CheckOptions&)
{
    Outcome o;
    double r_t = 0, r_s = 0, r_d = 0, r_th = 0, r_eta = 0;
    const cplx z(0.23, 0.11), i(0, 1);
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            double u = -0.5 + a / 9.0;
            double y0 = std::sqrt(1 - u * u), y = y0 * std::pow(3.0 / y0, b / 9.0);
            ComplexUH tau(u, y);
            cplx e = dedekind_eta(tau);
            r_t = std::max(r_t, std::abs(dedekind_eta(ComplexUH(u + 1, y)) - std::exp(i * kPi / 12.0) * e));
            cplx t = tau.value();
            r_s = std::max(r_s, std::abs(dedekind_eta(ComplexUH(-1.0 / t)) - std::sqrt(t / i) * e));
            r_d = std::max(r_d, std::abs(theta1_z_derivative_at_zero(tau) - kTwoPi * e * e * e));
            r_th = std::max(r_th, std::abs(theta1(z, tau) - theta1(z, tau, {}, Theta1Path::Product)));
            r_eta = std::max(r_eta, std::abs(e - dedekind_eta_product(tau)));
        }
    double worst = std::max({r_t, r_s, r_d, r_th, r_eta});
    o.pass = worst <= 1e-10;
    o.stats = {{"eta_T", r_t}, {"eta_S", r_s}, {"theta1_prime", r_d}, {"theta1_series_product", r_th},
               {"eta_series_product", r_eta}, {"points", 100}};
    o.summary = fmt("max residual %.2e over 100 points", worst);
    return o;
}

// ---- 2
Outcome green_oracles(const CheckOptions&)
{
    Outcome o;
    const ComplexUH taus[] = {{0, 1}, {0.3, 1.1}, {-0.4, 1.6}, {0.1, 2.5}};
    const TorusPoint xs[] = {{0.3, 0.4}, {0.5, 0.5}, {0.1, 0.7}, {0.8, 0.15}, {0.45, 0.05}, {0.25, 0.9}};
    double d_eig = 0, d_app = 0, worst_mean = 0;
    GreenEvalConfig eig{GreenMode::EigenSeries, 400, 5e-3}, app{GreenMode::AppendixSeries};
    for (auto tau : taus) {
        for (auto x : xs) {
            double g = green(tau, x);
            d_eig = std::max(d_eig, std::abs(g - green(tau, x, eig)));
            d_app = std::max(d_app, std::abs(g - green(tau, x, app)));
        }
        worst_mean = std::max(worst_mean, std::abs(green_mean_zero_check(tau, 256)));
    }
    o.pass = d_eig <= 5e-3 && d_app <= 1e-8 && worst_mean <= 1e-3;
    o.stats = {{"closed_vs_eigen", d_eig}, {"closed_vs_appendix", d_app}, {"mean_zero", worst_mean}};
    char b[160];
    std::snprintf(b, sizeof b, "eigen %.1e, appendix %.1e, mean %.1e", d_eig, d_app, worst_mean);
    o.summary = b;
    return o;
}

// ---- 3
Outcome green_modular(const CheckOptions&)
{
    Outcome o;
    std::vector<TorusPoint> pts;
    RngStream rng(3, 0);
    while (pts.size() < 50) pts.emplace_back(rng.uniform(), rng.uniform());
    const ComplexUH taus[] = {{0, 1}, {0.5, 0.9}, {-0.3, 1.4}, {0.1, 2.2}, {1.7, 0.6}};
    double worst = 0;
    for (auto tau : taus)
        for (auto psi : {ModularElement::translation(), ModularElement::inversion()})
            worst = std::max(worst, modular_invariance_residual(tau, psi, pts));
    o.pass = worst <= 1e-9;
    o.stats = {{"max_residual", worst}};
    o.summary = fmt("max |G_psi(tau)(x) - G_tau(psi~ x)| = %.2e", worst);
    return o;
}

// ---- 4
Outcome theta_extraction(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0.2, 1.3);
    const double th = theta_const(tau);
    json ladder = json::array();
    double last = 0;
    for (double e : {1e-2, 3e-3, 1e-3}) {
        int N = int(std::ceil(10.0 / e));
        double d = spectral_variance(tau, N, e) + std::log(e) - th;
        ladder.push_back({{"eps", e}, {"N", N}, {"defect", d}});
        logf(opt, fmt("eps %.0e defect %.3e", e, d));
        last = std::abs(d);
    }
    double lo = 1e300, hi = -1e300;
    for (TorusPoint x : {TorusPoint{0, 0}, TorusPoint{0.3, 0.7}, TorusPoint{0.5, 0.5}, TorusPoint{0.91, 0.13}}) {
        double v = green_regularized_pair(tau, x, x, 1e-2);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    o.pass = last <= 1e-2 && hi - lo <= 1e-6;
    o.stats = {{"ladder", ladder}, {"final_defect", last}, {"x_uniformity", hi - lo}};
    o.summary = fmt("final defect %.2e, x-spread %.1e", last, hi - lo);
    return o;
}

// ---- 5
Outcome gff_covariance(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0, 1);
    const int N = 64, G = 256, R = opt.quick ? 2500 : 10000;
    const int disp[5][2] = {{64, 64}, {128, 0}, {32, 96}, {128, 128}, {16, 0}};
    std::vector<std::array<double, 5>> prod(R);
    par_blocks(
        R, opt.threads, [&] { return std::make_unique<GffGridSampler>(tau, N, G); },
        [&](auto& s, int r) {
            RngStream rng(5, r);
            RealGrid X;
            s->sample(rng, X);
            for (int d = 0; d < 5; ++d) {
                double acc = 0;
                for (int j = 0; j < G; ++j)
                    for (int k = 0; k < G; ++k) acc += X(j, k) * X((j + disp[d][0]) % G, (k + disp[d][1]) % G);
                prod[r][d] = acc / (double(G) * G);
            }
        });
    json rows = json::array();
    double worst = 0;
    for (int d = 0; d < 5; ++d) {
        std::vector<double> v(R);
        for (int r = 0; r < R; ++r) v[r] = prod[r][d];
        MeanSE m = mean_se(v);
        TorusPoint x(disp[d][0] / double(G), disp[d][1] / double(G));
        double ref = spectral_covariance(tau, N, x);
        double z = (m.mean - ref) / m.se;
        worst = std::max(worst, std::abs(z));
        rows.push_back({{"x", {x.x1, x.x2}}, {"empirical", m.mean}, {"se", m.se}, {"series", ref}, {"z", z}});
    }
    o.pass = worst <= 3.0;
    o.stats = {{"replicas", R}, {"displacements", rows}, {"max_abs_z", worst}};
    o.summary = fmt("max |z| = %.2f over 5 displacements", worst);
    return o;
}

// ---- 6
Outcome subcritical_gmc(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0.2, 1.3);
    const int Rcell = opt.quick ? 2500 : 10000, Rmass = opt.quick ? 1000 : 4000, Rmcf = opt.quick ? 150 : 400;
    json per = json::array();
    double worst_cell = 0, worst_mass = 0;
    bool mcf_ok = true;
    for (double g : {0.5, 1.0, 1.5}) {
        const double expect = expected_total_mass(tau, g);
        // cell-wise
        const int G = 32;
        const int cells[3][2] = {{0, 0}, {8, 16}, {21, 27}};
        std::vector<std::array<double, 3>> cv(Rcell);
        par_blocks(
            Rcell, opt.threads, [&] { return std::make_unique<ChaosSampler>(tau, 8, g, G); },
            [&](auto& s, int r) {
                RngStream rng(61, r);
                auto m = s->sample(rng);
                for (int c = 0; c < 3; ++c) cv[r][c] = m.at(cells[c][0], cells[c][1]) * G * G / expect;
            });
        json cz = json::array();
        for (int c = 0; c < 3; ++c) {
            std::vector<double> v(Rcell);
            for (int r = 0; r < Rcell; ++r) v[r] = cv[r][c];
            MeanSE m = mean_se(v);
            double z = (m.mean - 1.0) / m.se;
            worst_cell = std::max(worst_cell, std::abs(z));
            cz.push_back({{"mean", m.mean}, {"se", m.se}, {"z", z}});
        }
        // total mass
        std::vector<double> tot(Rmass);
        par_blocks(
            Rmass, opt.threads, [&] { return std::make_unique<ChaosSampler>(tau, 32, g); },
            [&](auto& s, int r) {
                RngStream rng(62, r);
                tot[r] = s->sample(rng).total_mass();
            });
        MeanSE mm = mean_se(tot);
        double zm = (mm.mean - expect) / mm.se;
        worst_mass = std::max(worst_mass, std::abs(zm));
        // max cell fraction under refinement
        json meds = json::array();
        double prev = 1e300;
        for (int N : {8, 16, 32}) {
            std::vector<double> f(Rmcf);
            par_blocks(
                Rmcf, opt.threads, [&] { return std::make_unique<ChaosSampler>(tau, N, g); },
                [&](auto& s, int r) {
                    RngStream rng(63, r);
                    f[r] = s->sample(rng).max_cell_fraction();
                });
            double md = median(f);
            if (!(md < prev)) mcf_ok = false;
            prev = md;
            meds.push_back(md);
        }
        logf(opt, fmt("gamma %.1f: mass z = %.2f", g, zm));
        per.push_back({{"gamma", g}, {"cells", cz}, {"mass", mm.mean}, {"mass_se", mm.se}, {"expected", expect},
                       {"mass_z", zm}, {"max_cell_fraction_medians", meds}});
    }
    o.pass = worst_cell <= 3 && worst_mass <= 3 && mcf_ok;
    o.stats = {{"per_gamma", per}, {"max_cell_z", worst_cell}, {"max_mass_z", worst_mass},
               {"max_cell_fraction_decreasing", mcf_ok}};
    char b[160];
    std::snprintf(b, sizeof b, "cell |z| <= %.2f, mass |z| <= %.2f, refinement %s", worst_cell, worst_mass,
                  mcf_ok ? "decreasing" : "NOT decreasing");
    o.summary = b;
    return o;
}

// ---- 7
Outcome gmc_pushforward(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0, 2);
    const ModularElement psi = ModularElement::inversion();
    const ComplexUH tau2 = act_on_uhp(psi, tau);
    const int R = opt.quick ? 400 : 1000, N = 32;
    std::vector<double> a(R), b(R);
    par_blocks(
        R, opt.threads, [&] { return std::make_unique<ChaosSampler>(tau2, N, 1.0); },
        [&](auto& s, int r) {
            RngStream rng(71, r);
            a[r] = s->sample(rng).total_mass();
        });
    par_blocks(
        R, opt.threads, [&] { return std::make_unique<ChaosSampler>(tau, N, 1.0); },
        [&](auto& s, int r) {
            RngStream rng(72, r);
            b[r] = pushforward(s->sample(rng), psi).total_mass();
        });
    KSResult ks = ks_two_sample(a, b);
    o.pass = ks.p_value > 0.01;
    o.stats = {{"replicas", R}, {"D", ks.D}, {"p_value", ks.p_value}, {"mean_psi_tau", mean_se(a).mean},
               {"mean_pushforward", mean_se(b).mean}};
    o.summary = fmt("KS D = %.3f, p = %.3f", ks.D, ks.p_value);
    return o;
}

// ---- 8
Outcome critical_chaos(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0, 1);
    std::vector<int> Ns = opt.quick ? std::vector<int>{64, 128} : std::vector<int>{64, 128, 256};
    const int R = opt.quick ? 300 : 1000;
    std::vector<double> med, umed, inv;
    json rungs = json::array();
    for (int N : Ns) {
        std::vector<double> m(R), u(R), w(R);
        par_blocks(
            R, opt.threads, [&] { return std::make_unique<ChaosSampler>(tau, N, 2.0); },
            [&](auto& s, int r) {
                RngStream rng(81, r);
                m[r] = s->sample(rng).total_mass();
                u[r] = uncorrected_critical_measure_from_grid(s->last_field(), tau, s->eps()).total_mass();
                w[r] = 1.0 / std::sqrt(m[r]);
            });
        med.push_back(median(m));
        umed.push_back(median(u));
        inv.push_back(mean_se(w).mean);
        logf(opt, fmt("N %.0f median %.4f", N, med.back()));
        rungs.push_back({{"N", N}, {"eps", default_eps(tau, N)}, {"median", med.back()},
                         {"uncorrected_median", umed.back()}, {"mean_inverse_sqrt", inv.back()}});
    }
    const size_t L = Ns.size() - 1;
    double stab = std::abs(med[L] / med[L - 1] - 1.0);
    double istab = std::abs(inv[L] / inv[L - 1] - 1.0);
    double worst_drop = 1.0;
    for (size_t k = 1; k < Ns.size(); ++k) worst_drop = std::min(worst_drop, 1.0 - umed[k] / umed[k - 1]);
    bool a = stab <= 0.10, b = worst_drop >= 0.30, c = istab <= 0.10;
    o.pass = a && b && c;
    o.stats = {{"rungs", rungs}, {"median_change_last", stab}, {"uncorrected_min_drop", worst_drop},
               {"inverse_sqrt_change_last", istab}, {"median_stable", a}, {"uncorrected_drop_ok", b},
               {"inverse_sqrt_stable", c}};
    char s[200];
    std::snprintf(s, sizeof s, "median %+.1f%% %s, uncorrected drop %.1f%%/rung %s, E[m^-1/2] %+.1f%% %s",
                  100 * (med[L] / med[L - 1] - 1), a ? "ok" : "FAIL", 100 * worst_drop, b ? "ok" : "FAIL",
                  100 * (inv[L] / inv[L - 1] - 1), c ? "ok" : "FAIL");
    o.summary = s;
    return o;
}

// ---- 9
Outcome kpz_scaling(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0.1, 1.2);
    InsertionSet ins = parse_insertions("0.25,0.25,1.0;0.75,0.5,0.5");
    MonteCarloConfig mc;
    mc.replicas = opt.quick ? 200 : 1000;
    mc.seed = 9;
    mc.threads = opt.threads;
    Discretization d{16, 64};
    LQFTParams p1(1.0, 1.0);
    auto A = chaos_functional_samples(p1, tau, ins, mc, d);
    PartitionEstimate base = partition_from_samples(p1, tau, ins, A);
    double worst = 0;
    json rows = json::array();
    for (double mu : {0.5, 2.0, 10.0}) {
        PartitionEstimate e = partition_from_samples(LQFTParams(1.0, mu), tau, ins, A);
        double res = std::abs(e.value / base.value / std::pow(mu, -ins.alpha_sum() / 1.0) - 1.0);
        worst = std::max(worst, res);
        rows.push_back({{"mu", mu}, {"value", e.value}, {"residual", res}});
    }
    o.pass = worst <= 1e-12;
    o.stats = {{"base", base.value}, {"rows", rows}, {"max_residual", worst}};
    o.summary = fmt("max residual %.1e", worst);
    return o;
}

// ---- 10
Outcome partition_modular(const CheckOptions& opt)
{
    Outcome o;
    const ComplexUH tau(0, 2);
    const ModularElement psi = ModularElement::inversion();
    const ComplexUH tau2 = act_on_uhp(psi, tau);
    const TorusPoint z(0.25, 0.5);
    const TorusPoint zt = act_on_torus(psi, z);
    LQFTParams p(1.0, 1.0);
    MonteCarloConfig mc;
    mc.replicas = opt.quick ? 2000 : 10000;
    mc.threads = opt.threads;
    Discretization d{32, 0};
    InsertionSet lhs_ins{{{z, 1.0}}}, rhs_ins{{{zt, 1.0}}};
    mc.seed = 101;
    PartitionEstimate lhs = partition_function(p, tau2, lhs_ins, mc, d);
    mc.seed = 102;
    PartitionEstimate rhs = partition_function(p, tau, rhs_ins, mc, d);
    const double delta = conformal_weight(1.0, p.Q);
    const double jac = std::pow(std::abs(derivative(psi, tau)), -delta);
    double ratio = lhs.value / (jac * rhs.value);
    double rse = std::hypot(lhs.std_error / lhs.value, rhs.std_error / rhs.value) * ratio;
    o.pass = std::abs(ratio - 1.0) <= 3.0 * rse;
    o.stats = {{"lhs", lhs.value}, {"lhs_se", lhs.std_error}, {"rhs", rhs.value}, {"rhs_se", rhs.std_error},
               {"jacobian", jac}, {"ratio", ratio}, {"ratio_se", rse}, {"replicas", mc.replicas}};
    o.summary = fmt("ratio %.4f +- %.4f", ratio, rse);
    return o;
}

// ---- 11
Outcome seiberg_gating(const CheckOptions& opt)
{
    Outcome o;
    LQFTParams p(1.0, 1.0);
    const ComplexUH tau(0, 1.2);
    MonteCarloConfig mc;
    mc.replicas = 100;
    mc.seed = 11;
    mc.threads = opt.threads;
    json cells = json::array();
    int bad = 0;
    for (double a1 : {-0.5, 1.5, p.Q})
        for (double a2 : {-2.0, 0.5, 2.4}) {
            InsertionSet ins{{{TorusPoint(0.25, 0.25), a1}, {TorusPoint(0.75, 0.5), a2}}};
            std::string expect = a1 + a2 <= 0 ? "SeibergViolationSum" : (a1 >= p.Q || a2 >= p.Q) ? "zero" : "positive";
            std::string got;
            try {
                PartitionEstimate e = partition_function(p, tau, ins, mc, {8, 0});
                if (e.value == 0.0 && !e.diagnostic.empty())
                    got = "zero";
                else if (std::isfinite(e.value) && e.value > 0)
                    got = "positive";
                else
                    got = "invalid value";
            } catch (const Error& e) {
                got = e.kind() == ErrorKind::SeibergViolationSum ? "SeibergViolationSum" : error_kind_name(e.kind());
            }
            if (got != expect) ++bad;
            cells.push_back({{"alpha", {a1, a2}}, {"expected", expect}, {"got", got}});
        }
    o.pass = bad == 0;
    o.stats = {{"cells", cells}};
    o.summary = fmt("%.0f/9 cells as expected", 9.0 - bad);
    return o;
}

// ---- 12
Outcome weyl_anomaly(const CheckOptions&)
{
    Outcome o;
    const ComplexUH tau(0.15, 1.25);
    const double Q = 2.3;
    LogConformalFactor spec;
    RngStream rng(12, 0);
    for (int n = 0; n <= 3; ++n)
        for (int m = -3; m <= 3; ++m) {
            if (n == 0 && m <= 0) continue;
            spec.entries.push_back({n, m, 0.1 * rng.complex_normal()});
        }
    SpectralField f = build_log_conformal_factor(spec, tau, 6);
    double e_coef = dirichlet_energy_coefficients(f), e_grid = dirichlet_energy_grid(f);
    double direct = 0;
    for (auto& e : spec.entries) direct += 2.0 * std::norm(e.value);
    direct *= kTwoPi;
    double logf_ = std::log(weyl_anomaly_factor(f, Q));
    double formula = (1 + 6 * Q * Q) / (96 * kPi) * direct;
    LogConformalFactor spec3 = spec;
    for (auto& e : spec3.entries) e.value *= 3.0;
    double log3 = std::log(weyl_anomaly_factor(build_log_conformal_factor(spec3, tau, 6), Q));
    double r_formula = std::abs(logf_ - formula) / formula;
    double r_energy = std::abs(e_coef - e_grid) / e_coef;
    double r_scale = std::abs(log3 - 9.0 * logf_) / (9.0 * logf_);
    o.pass = r_formula <= 1e-12 && r_energy <= 1e-6 && r_scale <= 1e-12;
    o.stats = {{"log_factor", logf_}, {"formula", formula}, {"energy_coefficients", e_coef},
               {"energy_grid", e_grid}, {"formula_residual", r_formula}, {"energy_residual", r_energy},
               {"scaling_residual", r_scale}};
    char b[160];
    std::snprintf(b, sizeof b, "formula %.1e, energy %.1e, scaling %.1e", r_formula, r_energy, r_scale);
    o.summary = b;
    return o;
}

// ---- 13, 14 share the table

struct Gravity {
    ModulusSetup setup;
    DensityTable table;
    double build_seconds = 0;
};

std::mutex g_grav_mu;
std::unique_ptr<Gravity> g_grav[2];

const Gravity& pure_gravity(const CheckOptions& opt)
{
    std::lock_guard<std::mutex> lk(g_grav_mu);
    auto& slot = g_grav[opt.quick ? 1 : 0];
    if (!slot) {
        auto t0 = std::chrono::steady_clock::now();
        auto g = std::make_unique<Gravity>();
        g->setup = make_modulus_setup(MatterCFT::pure_gravity(), 1.0, 1);
        g->setup.mc.replicas = opt.quick ? 500 : 2000;
        g->setup.mc.threads = opt.threads;
        MomentCache cache(opt.cache_dir);
        logf(opt, "moment cache " + cache.path());
        g->table = DensityTable::build(g->setup, &cache, [&](int done, int total) {
            if (done % 24 == 0 || done == total) logf(opt, fmt("table %.0f/%.0f", done, total));
        });
        g->build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        slot = std::move(g);
    }
    return *slot;
}

Outcome volume_law(const CheckOptions& opt)
{
    Outcome o;
    const Gravity& g = pure_gravity(opt);
    const int K = opt.quick ? 2000 : 10000;
    auto js = joint_law_sampler(g.setup, g.table, K, 13);
    std::vector<double> vol(K), im(K);
    for (int k = 0; k < K; ++k) {
        vol[k] = js[k].volume;
        im[k] = js[k].tau.im;
    }
    const double shape = 1.0;  // s/gamma with one alpha = gamma insertion
    KSResult ks = ks_one_sample(vol, [&](double x) { return gamma_cdf(x, shape, g.setup.params.mu); });
    Correlation c = pearson(vol, im);
    double worst_mass = 0;
    for (auto& s : js) worst_mass = std::max(worst_mass, std::abs(s.measure_mass / s.volume - 1.0));
    bool a = ks.p_value > 0.01, b = std::abs(c.r) <= 3.0 * c.se;
    o.pass = a && b;
    o.stats = {{"samples", K}, {"ks_D", ks.D}, {"ks_p", ks.p_value}, {"corr", c.r}, {"corr_se", c.se},
               {"tail_mass", g.table.tail_mass()}, {"table_seconds", g.build_seconds},
               {"measure_mass_residual", worst_mass}};
    char s[160];
    std::snprintf(s, sizeof s, "KS p = %.3f, corr(volume, Im tau) = %.4f +- %.4f", ks.p_value, c.r, c.se);
    o.summary = s;
    return o;
}

Outcome modulus_reduction(const CheckOptions& opt)
{
    Outcome o;
    const Gravity& g = pure_gravity(opt);
    const DensityTable& T = g.table;
    std::vector<double> r, se;
    for (int i = 0; i < T.nu(); ++i)
        for (int k = 0; k < T.nv(); ++k) {
            ComplexUH tau = T.tau(i, k);
            double f = std::sqrt(tau.im) * std::norm(dedekind_eta(tau));
            r.push_back(T.at(i, k).value / f);
            se.push_back(T.at(i, k).se / f);
        }
    double worst = 0;
    for (size_t a = 0; a < r.size(); ++a)
        for (size_t b = a + 1; b < r.size(); ++b)
            worst = std::max(worst, std::abs(r[a] - r[b]) / std::hypot(se[a], se[b]));
    // boundary identifications: u = -1/2 ~ u = 1/2 on every row, u ~ -u on the arc
    double worst_b = 0;
    auto z = [&](int i1, int k1, int i2, int k2) {
        const auto &p = T.at(i1, k1), &q = T.at(i2, k2);
        return std::abs(p.value - q.value) / std::hypot(p.se, q.se);
    };
    for (int k = 0; k < T.nv(); ++k) worst_b = std::max(worst_b, z(0, k, T.nu() - 1, k));
    for (int i = 0; i < T.nu() / 2; ++i) worst_b = std::max(worst_b, z(i, 0, T.nu() - 1 - i, 0));
    o.pass = worst <= 3.0 && worst_b <= 3.0;
    MeanSE m = mean_se(r);
    o.stats = {{"points", r.size()}, {"max_pair_z", worst}, {"max_boundary_z", worst_b}, {"ratio_mean", m.mean},
               {"ratio_spread", *std::max_element(r.begin(), r.end()) - *std::min_element(r.begin(), r.end())}};
    char s[160];
    std::snprintf(s, sizeof s, "constancy max z = %.2f over %zu points, boundary max z = %.2f", worst, r.size(),
                  worst_b);
    o.summary = s;
    return o;
}

// ---- 15
Outcome determinism(const CheckOptions& opt)
{
    Outcome o;
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("torus_lqg_det_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const std::string& n) { return (dir / n).string(); };
    const std::string th = std::to_string(std::max(1, opt.threads));

    struct Case {
        std::string name;
        std::vector<std::string> args;  // {} placeholders: @ = output path, % = cache dir
        bool stdout_only;
    };
    const std::string lqg = "--grid 3x3 --t-max 14 --N 8 --replicas 100 --seed 4";
    auto split = [](const std::string& s) {
        std::vector<std::string> v;
        std::istringstream in(s);
        for (std::string w; in >> w;) v.push_back(w);
        return v;
    };
    std::vector<Case> cases = {
        {"special-fn", split("special-fn eval --tau 0.1,1.3"), true},
        {"modular", split("modular reduce --tau 3.3,0.2"), true},
        {"green-eval", split("green eval --tau 0,1 --x 0.3,0.4"), true},
        {"green-table", split("green table --tau 0.2,1.1 --grid 16 --out @"), false},
        {"gff", split("gff sample --tau 0,1 --N 16 --seed 5 --out @"), false},
        {"gmc", split("gmc sample --gamma 1.2 --tau 0,1 --N 16 --replicas 40 --seed 3 --out @ --threads T"), false},
        {"lqft", split("lqft partition --tau 0,1.3 --insertions 0.25,0.25,1 --replicas 200 --N 16 --out @ --threads T"),
         false},
        {"density", split("lqg modulus-density " + lqg + " --cache-dir % --out @ --threads T"), false},
        {"joint", split("lqg sample-joint " + lqg + " --samples 30 --cache-dir % --out @"), false},
    };
    json rows = json::array();
    bool all = true;
    for (auto& c : cases) {
        std::string text[2];
        int code[2];
        for (int run = 0; run < 2; ++run) {
            std::vector<std::string> a = c.args;
            // paths are recorded in the header, so both runs use the same ones;
            // the cache is emptied in between so the second run recomputes
            std::string outp = p(c.name + ".out");
            fs::remove_all(p("cache"));
            for (auto& w : a) {
                if (w == "@") w = outp;
                if (w == "%") w = p("cache");
                if (w == "T") w = th;
            }
            std::ostringstream out, err;
            code[run] = run_subcommand(a, out, err);
            if (c.stdout_only) {
                text[run] = out.str();
            } else {
                std::ifstream f(outp, std::ios::binary);
                std::ostringstream s;
                s << f.rdbuf();
                text[run] = s.str();
                if (run == 0) fs::copy_file(outp, p(c.name + "0.out"), fs::copy_options::overwrite_existing);
            }
            if (code[run] != 0) logf(opt, c.name + ": " + err.str());
        }
        bool same = code[0] == 0 && code[1] == 0 && !text[0].empty() && same_output_text(text[0], text[1]);
        all = all && same;
        rows.push_back({{"case", c.name}, {"identical", same}, {"exit", {code[0], code[1]}}});
    }
    // plot of the density table
    {
        bool same = false;
        std::ostringstream e;
        int c1 = run_subcommand({"lqg", "plot", p("density0.out"), "--out", p("a.svg")}, e, e);
        int c2 = run_subcommand({"lqg", "plot", p("density0.out"), "--out", p("b.svg")}, e, e);
        if (c1 == 0 && c2 == 0) {
            std::ifstream a(p("a.svg"), std::ios::binary), b(p("b.svg"), std::ios::binary);
            std::ostringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            same = !sa.str().empty() && sa.str() == sb.str();
        }
        all = all && same;
        rows.push_back({{"case", "plot"}, {"identical", same}, {"exit", {c1, c2}}});
    }
    fs::remove_all(dir);
    o.pass = all;
    o.stats = {{"cases", rows}};
    int ok = 0;
    for (auto& r : rows) ok += r["identical"].get<bool>();
    o.summary = fmt("%.0f/%.0f subcommands reproduce byte-for-byte", ok, double(rows.size()));
    return o;
}

}  // namespace

std::string check_title(int id)
{
    if (id < 1 || id > kCheckCount) throw Error(ErrorKind::InvalidArgument, "no check #" + std::to_string(id));
    return kSpecs[id - 1].title;
}

CheckResult run_check(int id, const CheckOptions& opt)
{
    CheckResult r;
    r.id = id;
    r.title = check_title(id);
    r.time_limit = kSpecs[id - 1].limit;
    if (opt.log) *opt.log << "[#" << id << " " << r.title << "]\n" << std::flush;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        switch (id) {
        case 1: o = special_functions(opt); break;
        case 2: o = green_oracles(opt); break;
        case 3: o = green_modular(opt); break;
        case 4: o = theta_extraction(opt); break;
        case 5: o = gff_covariance(opt); break;
        case 6: o = subcritical_gmc(opt); break;
        case 7: o = gmc_pushforward(opt); break;
        case 8: o = critical_chaos(opt); break;
        case 9: o = kpz_scaling(opt); break;
        case 10: o = partition_modular(opt); break;
        case 11: o = seiberg_gating(opt); break;
        case 12: o = weyl_anomaly(opt); break;
        case 13: o = volume_law(opt); break;
        case 14: o = modulus_reduction(opt); break;
        case 15: o = determinism(opt); break;
        }
    } catch (const std::exception& e) {
        o.pass = false;
        o.summary = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.stats = std::move(o.stats);
    r.summary = o.summary;
    r.pass = o.pass && r.seconds < r.time_limit;
    if (o.pass && !r.pass) r.summary += fmt("; over the %.0f s limit", r.time_limit);
    r.stats["seconds"] = r.seconds;
    r.stats["time_limit"] = r.time_limit;
    return r;
}

std::string format_line(const CheckResult& r)
{
    char b[512];
    std::snprintf(b, sizeof b, "%s  #%-2d %-30s (%.1f s)  %s", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                  r.seconds, r.summary.c_str());
    return b;
}

}  // namespace torus_lqg::cli
