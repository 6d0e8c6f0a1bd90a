#include "torus_lqg/torus_green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "torus_lqg/special_fn.hpp"

namespace torus_lqg {

double green_coefficient(ComplexUH tau, long n, long m)
{
    double re = n * tau.re - m, im = n * tau.im;
    return tau.im / (kTwoPi * (re * re + im * im));
}

namespace {

bool at_origin(TorusPoint x)
{
    const double t = 1e-15;
    auto near0 = [&](double v) { return v < t || v > 1.0 - t; };
    return near0(x.x1) && near0(x.x2);
}

double green_closed(ComplexUH tau, TorusPoint x)
{
    cplx z = to_complex(tau, x.x1, x.x2);
    cplx th = theta1(z, tau);
    return kPi * tau.im * x.x2 * x.x2 - std::log(std::abs(th)) + std::log(std::abs(dedekind_eta(tau)));
}

double green_eigen(ComplexUH tau, TorusPoint x, int N)
{
    std::vector<cplx> e1(2 * N + 1), e2(2 * N + 1);
    for (int k = -N; k <= N; ++k) {
        e1[k + N] = std::polar(1.0, kTwoPi * k * x.x1);
        e2[k + N] = std::polar(1.0, kTwoPi * k * x.x2);
    }
    // symmetric in (n,m) -> (-n,-m): sum the half lattice twice
    double s = 0.0;
    for (int n = 0; n <= N; ++n) {
        double row = 0.0;
        for (int m = (n == 0 ? 1 : -N); m <= N; ++m)
            row += green_coefficient(tau, n, m) * (e1[n + N] * e2[m + N]).real();
        s += row;
    }
    return 2.0 * s;
}

// Bernoulli-resummed x2 part plus the exponentially convergent n-sums
double green_appendix(ComplexUH tau, TorusPoint x, double tol)
{
    const double x2 = x.x2;
    if (x2 <= 0.0) throw Error(ErrorKind::NonConvergence, "appendix series needs x2 != 0");
    cplx z = to_complex(tau, x.x1, x.x2);
    cplx w = std::exp(cplx(0.0, kTwoPi) * z);
    cplx q2 = std::exp(cplx(0.0, kTwoPi) * tau.value());
    const double aq2 = std::abs(q2);
    const double rho = std::abs(w);
    const double r = std::max(rho, aq2 / rho);
    if (r >= 1.0 - 1e-12) throw Error(ErrorKind::NonConvergence, "appendix series does not converge here");
    const double C = 1.0 + 2.0 / (1.0 - aq2);

    double s = 0.0;
    cplx wn = 1.0, wmn = 1.0, q2n = 1.0;
    double rn = 1.0;
    const long max_terms = 10000000;
    for (long n = 1; n <= max_terms; ++n) {
        wn *= w;
        wmn /= w;
        q2n *= q2;
        rn *= r;
        cplx g = q2n / (1.0 - q2n);  // sum over m >= 1 of q^{2nm}
        s += (wn + g * (wn + wmn)).real() / double(n);
        double tail = C * rn * r / (double(n + 1) * (1.0 - r));
        if (tail <= tol) return kPi * tau.im * (x2 * x2 - x2 + 1.0 / 6.0) + s;
    }
    throw Error(ErrorKind::NonConvergence, "appendix series: max_terms reached");
}

}  // namespace

double green_eigen_error_estimate(ComplexUH tau, TorusPoint x, int N)
{
    double d = std::abs(nearest_image(tau, x)) / std::sqrt(tau.im);
    d = std::max(d, 1.0 / N);
    return tau.im / (2.0 * kPi * kPi * N * d);
}

double green(ComplexUH tau, TorusPoint x, const GreenEvalConfig& cfg)
{
    if (at_origin(x)) throw Error(ErrorKind::SingularPoint, "green evaluated at the diagonal");
    switch (cfg.mode) {
    case GreenMode::ClosedForm:
        return green_closed(tau, x);
    case GreenMode::EigenSeries: {
        if (cfg.eigen_cutoff < 1) throw Error(ErrorKind::InvalidArgument, "eigen cutoff must be >= 1");
        double est = green_eigen_error_estimate(tau, x, cfg.eigen_cutoff);
        if (est > cfg.tolerance)
            throw Error(ErrorKind::NonConvergence, "eigen series error estimate " + std::to_string(est) +
                                                       " exceeds tolerance");
        return green_eigen(tau, x, cfg.eigen_cutoff);
    }
    case GreenMode::AppendixSeries:
        return green_appendix(tau, x, cfg.tolerance);
    }
    return 0.0;
}

double shortest_period(ComplexUH tau)
{
    double best = std::numeric_limits<double>::infinity();
    int L = 2 + int(std::ceil(1.0 / tau.im)) + int(std::ceil(std::abs(tau.re)));
    L = std::min(L, 2000);
    for (int l = 0; l <= L; ++l)
        for (int k = -L - int(std::abs(tau.re) * l) - 1; k <= L + int(std::abs(tau.re) * l) + 1; ++k) {
            if (l == 0 && k <= 0) continue;
            best = std::min(best, std::abs(cplx(k + tau.re * l, tau.im * l)));
        }
    return best;
}

static void nearest_coords(ComplexUH tau, TorusPoint x, double& b1, double& b2)
{
    double y1 = x.x1 >= 0.5 ? x.x1 - 1.0 : x.x1;
    double y2 = x.x2 >= 0.5 ? x.x2 - 1.0 : x.x2;
    double best = std::numeric_limits<double>::infinity();
    const int R = 3;
    for (int l = -R; l <= R; ++l) {
        // for fixed x2 shift the best x1 shift is the rounding of the real part
        double u2 = y2 + l;
        double re0 = y1 + tau.re * u2;
        long kc = std::lround(-re0);
        for (long k = kc - 1; k <= kc + 1; ++k) {
            double u1 = y1 + double(k);
            double d = std::norm(to_complex(tau, u1, u2));
            if (d < best) {
                best = d;
                b1 = u1;
                b2 = u2;
            }
        }
    }
}

cplx nearest_image(ComplexUH tau, TorusPoint x)
{
    double b1 = 0, b2 = 0;
    nearest_coords(tau, x, b1, b2);
    return to_complex(tau, b1, b2);
}

TorusPoint from_complex(ComplexUH tau, cplx z)
{
    double x2 = z.imag() / tau.im;
    return {z.real() - tau.re * x2, x2};
}

double green_regular_part(ComplexUH tau, TorusPoint x)
{
    double b1 = 0, b2 = 0;
    nearest_coords(tau, x, b1, b2);
    cplx z = to_complex(tau, b1, b2);
    if (z == 0.0) return theta_const(tau);
    // the closed form is valid for any lattice representative
    return kPi * tau.im * b2 * b2 - std::log(std::abs(theta1(z, tau))) + std::log(std::abs(z)) +
           std::log(std::abs(dedekind_eta(tau)));
}

double green_mean_zero_check(ComplexUH tau, int grid, const GreenEvalConfig& cfg)
{
    if (grid < 2) throw Error(ErrorKind::InvalidArgument, "grid must be >= 2");
    const double r = 0.45 * shortest_period(tau);
    double s = 0.0;
    for (int j = 0; j < grid; ++j) {
        double row = 0.0;
        for (int k = 0; k < grid; ++k) {
            TorusPoint x{(j + 0.5) / grid, (k + 0.5) / grid};
            double a = std::abs(nearest_image(tau, x));
            double v = green(tau, x, cfg);
            if (a < r) v += std::log(a / r);
            row += v;
        }
        s += row;
    }
    return tau.im * s / (double(grid) * grid) + kPi * r * r / 2.0;
}

namespace {

// average over t, t' of -ln|p + eps (e^{it} - e^{it'})|
double singular_double_average(cplx p, double eps)
{
    double a = std::abs(p);
    if (a >= 2.0 * eps) return -std::log(a);
    double b = a / eps;
    double t0 = std::acos(b / 2.0);
    auto f = [b](double phi) { return 0.5 * std::log(std::max(b * b + 1.0 - 2.0 * b * std::cos(phi), 1.0)); };
    double I = 0.0;
    if (t0 < kPi) I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, t0, kPi, 15, 1e-14) / kPi;
    return -std::log(eps) - I;
}

}  // namespace

double green_regularized_pair(ComplexUH tau, TorusPoint x, TorusPoint w, double eps, int quad_points)
{
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    if (quad_points < 16) throw Error(ErrorKind::InvalidArgument, "quad_points must be >= 16");
    if (4.0 * eps >= shortest_period(tau))
        throw Error(ErrorKind::InvalidArgument, "eps too large for the period cell");

    const double L = shortest_period(tau);
    cplx p0 = nearest_image(tau, x - w);
    const bool split = std::abs(p0) + 2.0 * eps < 0.5 * L;

    // periodic trapezoid rule in both angles; near the diagonal only the smooth
    // remainder G + ln|p| is integrated numerically, the log part is exact
    const int P = quad_points;
    std::vector<TorusPoint> ring(P);
    for (int i = 0; i < P; ++i) ring[i] = from_complex(tau, std::polar(eps, kTwoPi * i / P));
    double s = 0.0;
    for (int i = 0; i < P; ++i) {
        TorusPoint u = x + ring[i];
        for (int k = 0; k < P; ++k) {
            TorusPoint d = u - (w + ring[k]);
            s += split ? green_regular_part(tau, d) : green(tau, d);
        }
    }
    double avg = s / (double(P) * P);
    return split ? singular_double_average(p0, eps) + avg : avg;
}

double modular_invariance_residual(ComplexUH tau, const ModularElement& psi,
                                   const std::vector<TorusPoint>& points)
{
    ComplexUH t2 = act_on_uhp(psi, tau);
    double worst = 0.0;
    for (const auto& x : points) {
        double lhs = green(t2, x);
        double rhs = green(tau, act_on_torus(psi, x));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace torus_lqg
