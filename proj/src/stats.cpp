#include "torus_lqg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "torus_lqg/error.hpp"

namespace torus_lqg {

MeanSE mean_se(const std::vector<double>& x)
{
    MeanSE r;
    const size_t n = x.size();
    if (n == 0) return r;
    r.mean = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    if (n < 2) return r;
    double ss = 0.0;
    for (double v : x) ss += (v - r.mean) * (v - r.mean);
    r.se = std::sqrt(ss / double(n - 1) / double(n));
    return r;
}

double median(std::vector<double> x)
{
    if (x.empty()) throw Error(ErrorKind::InvalidArgument, "median of an empty sample");
    const size_t h = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + h, x.end());
    double m = x[h];
    if (x.size() % 2 == 0) m = 0.5 * (m + *std::max_element(x.begin(), x.begin() + h));
    return m;
}

double kolmogorov_sf(double lambda)
{
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.3) {
        // theta-function dual form converges fast for small lambda
        const double c = std::sqrt(2.0 * 3.14159265358979323846) / lambda;
        double s = 0.0;
        for (int k = 1; k < 50; ++k) {
            double t = (2 * k - 1) * 3.14159265358979323846 / (2.0 * lambda);
            double term = std::exp(-t * t / 2.0);
            s += term;
            if (term < 1e-300) break;
        }
        return std::clamp(1.0 - c * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k < 200; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double ks_p(double D, double ne)
{
    const double sq = std::sqrt(ne);
    return kolmogorov_sf((sq + 0.12 + 0.11 / sq) * D);
}

}  // namespace

KSResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf)
{
    if (x.empty()) throw Error(ErrorKind::InvalidArgument, "KS test needs samples");
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double D = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double F = cdf(x[i]);
        D = std::max({D, double(i + 1) / n - F, F - double(i) / n});
    }
    return {D, ks_p(D, n), n};
}

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    std::vector<double> wa(a.size(), 1.0), wb(b.size(), 1.0);
    return ks_two_sample_weighted(a, wa, b, wb);
}

KSResult ks_two_sample_weighted(const std::vector<double>& a, const std::vector<double>& wa,
                                const std::vector<double>& b, const std::vector<double>& wb)
{
    if (a.empty() || b.empty() || a.size() != wa.size() || b.size() != wb.size())
        throw Error(ErrorKind::InvalidArgument, "KS test needs matching, non-empty samples and weights");
    auto prep = [](const std::vector<double>& x, const std::vector<double>& w, double& ne) {
        std::vector<std::pair<double, double>> v(x.size());
        double s = 0.0, s2 = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            if (!(w[i] >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative KS weight");
            v[i] = {x[i], w[i]};
            s += w[i];
            s2 += w[i] * w[i];
        }
        if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "KS weights sum to zero");
        for (auto& p : v) p.second /= s;
        std::sort(v.begin(), v.end());
        ne = s * s / s2;
        return v;
    };
    double na, nb;
    auto A = prep(a, wa, na), B = prep(b, wb, nb);
    size_t i = 0, j = 0;
    double Fa = 0.0, Fb = 0.0, D = 0.0;
    while (i < A.size() || j < B.size()) {
        double x = (j >= B.size() || (i < A.size() && A[i].first <= B[j].first)) ? A[i].first : B[j].first;
        while (i < A.size() && A[i].first == x) Fa += A[i++].second;
        while (j < B.size() && B[j].first == x) Fb += B[j++].second;
        D = std::max(D, std::abs(Fa - Fb));
    }
    const double ne = na * nb / (na + nb);
    return {D, ks_p(D, ne), ne};
}

double chi_square_sf(double x, int dof)
{
    if (dof < 1) throw Error(ErrorKind::InvalidArgument, "chi-square needs dof >= 1");
    if (x <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(dof), x));
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs,
                               double min_expected)
{
    if (observed.size() != probs.size() || observed.empty())
        throw Error(ErrorKind::InvalidArgument, "chi-square: counts and probabilities must match");
    const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
    const double ptot = std::accumulate(probs.begin(), probs.end(), 0.0);
    std::vector<double> O, E;
    double o = 0.0, e = 0.0;
    for (size_t c = 0; c < observed.size(); ++c) {
        o += observed[c];
        e += probs[c] / ptot * n;
        if (e >= min_expected) {
            O.push_back(o);
            E.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (E.empty()) {
            O.push_back(o);
            E.push_back(e);
        } else {
            O.back() += o;
            E.back() += e;
        }
    }
    ChiSquareResult r;
    for (size_t c = 0; c < O.size(); ++c) r.statistic += (O[c] - E[c]) * (O[c] - E[c]) / E[c];
    r.dof = int(O.size()) - 1;
    r.p_value = r.dof >= 1 ? chi_square_sf(r.statistic, r.dof) : 1.0;
    return r;
}

double gamma_cdf(double x, double shape, double rate)
{
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(shape, rate * x);
}

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 3) throw Error(ErrorKind::InvalidArgument, "correlation needs >= 3 pairs");
    const double n = double(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    Correlation c;
    c.r = sxy / std::sqrt(sxx * syy);
    c.se = (1.0 - c.r * c.r) / std::sqrt(n - 1.0);
    return c;
}

}  // namespace torus_lqg
