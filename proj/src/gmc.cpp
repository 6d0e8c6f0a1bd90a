#include "torus_lqg/gmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "torus_lqg/special_fn.hpp"

namespace torus_lqg {

double ChaosMeasure::total_mass() const
{
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double ChaosMeasure::max_cell_fraction() const
{
    double t = total_mass();
    return t > 0 ? *std::max_element(weights.begin(), weights.end()) / t : 0.0;
}

double chaos_prefactor(ComplexUH tau, double gamma)
{
    double Q = background_charge(gamma);
    return std::exp(0.5 * gamma * gamma * theta_const(tau) - 0.5 * gamma * Q * std::log(tau.im));
}

double expected_total_mass(ComplexUH tau, double gamma) { return chaos_prefactor(tau, gamma) * tau.im; }

namespace {

ChaosMeasure blank(const RealGrid& X, ComplexUH tau, double gamma, double eps, bool critical)
{
    ChaosMeasure m;
    m.grid = X.size;
    m.weights.resize(X.values.size());
    m.gamma = gamma;
    m.tau = tau;
    m.eps = eps;
    m.critical = critical;
    return m;
}

void check_gamma(double gamma)
{
    if (!(gamma > 0.0 && gamma < 2.0))
        throw Error(ErrorKind::InvalidGamma, "subcritical chaos needs gamma in (0,2), got " + std::to_string(gamma));
}

}  // namespace

ChaosMeasure chaos_measure_from_grid(const RealGrid& X, double sigma2, ComplexUH tau, double gamma, double eps)
{
    check_gamma(gamma);
    ChaosMeasure m = blank(X, tau, gamma, eps, false);
    const double area = tau.im / (double(X.size) * X.size);
    const double pre = chaos_prefactor(tau, gamma) * area;
    const double shift = 0.5 * gamma * gamma * sigma2;
    for (size_t i = 0; i < X.values.size(); ++i) m.weights[i] = pre * std::exp(gamma * X.values[i] - shift);
    return m;
}

ChaosMeasure critical_measure_from_grid(const RealGrid& X, double sigma2, ComplexUH tau, double eps)
{
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::InvalidArgument, "critical measure needs eps in (0,1)");
    ChaosMeasure m = blank(X, tau, 2.0, eps, true);
    const double area = tau.im / (double(X.size) * X.size);
    const double pre = std::sqrt(kPi / 2.0) * std::exp(2.0 * theta_const(tau) - 2.0 * std::log(tau.im)) *
                       std::sqrt(std::log(1.0 / eps)) * area;
    for (size_t i = 0; i < X.values.size(); ++i) m.weights[i] = pre * std::exp(2.0 * X.values[i] - 2.0 * sigma2);
    return m;
}

ChaosMeasure uncorrected_critical_measure_from_grid(const RealGrid& X, ComplexUH tau, double eps)
{
    ChaosMeasure m = blank(X, tau, 2.0, eps, true);
    const double area = tau.im / (double(X.size) * X.size);
    const double pre = eps * eps * area;
    const double lim = std::log(tau.im);
    for (size_t i = 0; i < X.values.size(); ++i) m.weights[i] = pre * std::exp(2.0 * (X.values[i] - lim));
    return m;
}

ChaosMeasure chaos_measure(const SpectralField& field_eps, double gamma, double Q, double eps, int G)
{
    check_gamma(gamma);
    if (std::abs(Q - background_charge(gamma)) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "Q must equal 2/gamma + gamma/2");
    return chaos_measure_from_grid(field_eps.to_grid(G), field_eps.point_variance, field_eps.tau(), gamma, eps);
}

ChaosMeasure critical_chaos_measure(const SpectralField& field_eps, double eps, int G)
{
    return critical_measure_from_grid(field_eps.to_grid(G), field_eps.point_variance, field_eps.tau(), eps);
}

ChaosMeasure pushforward(const ChaosMeasure& m, const ModularElement& psi)
{
    ChaosMeasure out = m;
    std::fill(out.weights.begin(), out.weights.end(), 0.0);
    const int G = m.grid;
    for (int j = 0; j < G; ++j)
        for (int k = 0; k < G; ++k) {
            auto t = act_on_grid_inverse(psi, j, k, G);
            out.at(t[0], t[1]) += m.at(j, k);
        }
    return out;
}

ChaosSampler::ChaosSampler(ComplexUH tau, int N, double gamma, int G, double eps)
    : tau_(tau), gamma_(gamma), eps_(eps > 0.0 ? eps : default_eps(tau, N)), gff_(tau, N, G, eps_)
{
    if (gamma != 2.0) check_gamma(gamma);
}

ChaosMeasure ChaosSampler::sample(RngStream& rng)
{
    gff_.sample(rng, X_);
    ChaosMeasure m = gamma_ == 2.0 ? critical_measure_from_grid(X_, gff_.point_variance(), tau_, eps_)
                                   : chaos_measure_from_grid(X_, gff_.point_variance(), tau_, gamma_, eps_);
    m.seed = rng.seed();
    m.stream = rng.stream_id();
    return m;
}

}  // namespace torus_lqg
