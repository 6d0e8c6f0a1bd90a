#include "torus_lqg/special_fn.hpp"

#include <cmath>
#include <string>

namespace torus_lqg {

namespace {

void check_tau(ComplexUH tau, const QSeriesConfig& cfg)
{
    if (tau.im < kMinImTau)
        throw Error(ErrorKind::InvalidArgument,
                    "Im tau = " + std::to_string(tau.im) + " below supported minimum 1e-3");
    if (!(cfg.tolerance > 0.0) || cfg.max_terms < 1)
        throw Error(ErrorKind::InvalidArgument, "bad q-series config");
}

// Sums term(n) for n = 0,1,... where |term(n)| <= bound(n) and the bound ratios
// bound(n+1)/bound(n) are eventually decreasing.  Stops once the geometric tail
// estimate drops below tol/10.
template <class Term, class Bound>
cplx sum_series(Term term, Bound bound, const QSeriesConfig& cfg, const char* what)
{
    cplx s = 0.0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        s += term(n);
        double b1 = bound(n + 1);
        double b2 = bound(n + 2);
        if (b1 == 0.0) return s;
        double r = b2 / b1;
        if (r < 1.0 && b1 / (1.0 - r) <= cfg.tolerance / 10.0) return s;
    }
    throw Error(ErrorKind::NonConvergence, std::string(what) + ": max_terms reached");
}

cplx nome_pow(ComplexUH tau, double p)  // q^p = exp(i pi tau p)
{
    return std::exp(cplx(0.0, kPi) * tau.value() * p);
}

}  // namespace

cplx dedekind_eta(ComplexUH tau, const QSeriesConfig& cfg)
{
    check_tau(tau, cfg);
    // Euler pentagonal series: prod(1-q^{2n}) = sum_k (-1)^k q^{k(3k-1)}, k in Z
    const double aq = std::exp(-kPi * tau.im);
    auto term = [&](int k) -> cplx {
        if (k == 0) return 1.0;
        double kk = k;
        cplx t = nome_pow(tau, kk * (3 * kk - 1)) + nome_pow(tau, kk * (3 * kk + 1));
        return (k % 2) ? -t : t;
    };
    auto bound = [&](int k) {
        double kk = k;
        return 2.0 * std::pow(aq, kk * (3 * kk - 1));
    };
    cplx s = sum_series(term, bound, cfg, "dedekind_eta");
    return nome_pow(tau, 1.0 / 12.0) * s;
}

cplx dedekind_eta_product(ComplexUH tau, const QSeriesConfig& cfg)
{
    check_tau(tau, cfg);
    const double a = std::exp(-kTwoPi * tau.im);  // |q^2|
    cplx q2 = nome_pow(tau, 2.0);
    cplx p = 1.0, qn = q2;
    double an = a;
    for (int n = 1; n <= cfg.max_terms; ++n) {
        p *= 1.0 - qn;
        qn *= q2;
        an *= a;
        // remaining factors change the product by at most exp(S)-1
        double S = an / ((1.0 - a) * (1.0 - an));
        if (std::expm1(S) * std::abs(p) <= cfg.tolerance / 10.0) return nome_pow(tau, 1.0 / 12.0) * p;
    }
    throw Error(ErrorKind::NonConvergence, "dedekind_eta_product: max_terms reached");
}

cplx theta1(cplx z, ComplexUH tau, const QSeriesConfig& cfg, Theta1Path path)
{
    check_tau(tau, cfg);
    const double y = std::abs(z.imag());
    if (path == Theta1Path::Series) {
        // 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z)
        auto term = [&](int n) -> cplx {
            double h = n + 0.5;
            cplx t = 2.0 * nome_pow(tau, h * h) * std::sin((2.0 * n + 1.0) * kPi * z);
            return (n % 2) ? -t : t;
        };
        auto bound = [&](int n) {
            double h = n + 0.5;
            return 2.0 * std::exp(-kPi * tau.im * h * h + (2.0 * n + 1.0) * kPi * y);
        };
        return sum_series(term, bound, cfg, "theta1");
    }

    // triple product form
    const double a = std::exp(-kTwoPi * tau.im);
    cplx w = std::exp(cplx(0.0, kTwoPi) * z);
    cplx winv = 1.0 / w;
    double aw = std::abs(w), awi = 1.0 / aw;
    cplx q2 = nome_pow(tau, 2.0);
    cplx p = 1.0 - winv;
    cplx qm = q2;
    double am = a;
    const cplx pre = cplx(0.0, -1.0) * nome_pow(tau, 1.0 / 6.0) * std::exp(cplx(0.0, kPi) * z) *
                     dedekind_eta(tau, cfg);
    for (int m = 1; m <= cfg.max_terms; ++m) {
        p *= (1.0 - qm * w) * (1.0 - qm * winv);
        qm *= q2;
        am *= a;
        double big = am * std::max(aw, awi);
        if (big < 0.5) {
            double S = (aw + awi) * am / ((1.0 - a) * (1.0 - big));
            double err = std::abs(pre * p) * std::expm1(S);
            if (err <= cfg.tolerance / 10.0) return pre * p;
        }
    }
    throw Error(ErrorKind::NonConvergence, "theta1 product: max_terms reached");
}

cplx theta1_z_derivative_at_zero(ComplexUH tau, const QSeriesConfig& cfg)
{
    check_tau(tau, cfg);
    auto term = [&](int n) -> cplx {
        double h = n + 0.5;
        cplx t = kTwoPi * (2.0 * n + 1.0) * nome_pow(tau, h * h);
        return (n % 2) ? -t : t;
    };
    auto bound = [&](int n) {
        double h = n + 0.5;
        return kTwoPi * (2.0 * n + 1.0) * std::exp(-kPi * tau.im * h * h);
    };
    return sum_series(term, bound, cfg, "theta1'");
}

cplx theta_aux(int k, ComplexUH tau, const QSeriesConfig& cfg)
{
    check_tau(tau, cfg);
    const double aq = std::exp(-kPi * tau.im);
    switch (k) {
    case 2: {
        auto term = [&](int n) -> cplx {
            double h = n + 0.5;
            return 2.0 * nome_pow(tau, h * h);
        };
        auto bound = [&](int n) {
            double h = n + 0.5;
            return 2.0 * std::pow(aq, h * h);
        };
        return sum_series(term, bound, cfg, "theta2");
    }
    case 3:
    case 4: {
        const bool alt = (k == 4);
        auto term = [&](int n) -> cplx {
            if (n == 0) return 1.0;
            cplx t = 2.0 * nome_pow(tau, double(n) * n);
            return (alt && (n % 2)) ? -t : t;
        };
        auto bound = [&](int n) { return 2.0 * std::pow(aq, double(n) * n); };
        return sum_series(term, bound, cfg, k == 3 ? "theta3" : "theta4");
    }
    default:
        throw Error(ErrorKind::InvalidArgument, "theta_aux: k must be 2, 3 or 4");
    }
}

double theta_const(ComplexUH tau)
{
    return -std::log(kTwoPi) - 2.0 * std::log(std::abs(dedekind_eta(tau)));
}

}  // namespace torus_lqg
