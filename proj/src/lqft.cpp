#include "torus_lqg/lqft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/torus_green.hpp"

namespace torus_lqg {

LQFTParams::LQFTParams(double g, double m) : gamma(g), mu(m), Q(background_charge(g))
{
    if (!(g > 0.0 && g <= 2.0)) throw Error(ErrorKind::InvalidGamma, "gamma must lie in (0,2]");
    if (!(m > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be positive");
}

double InsertionSet::alpha_sum() const
{
    double s = 0.0;
    for (const auto& p : points) s += p.alpha;
    return s;
}

bool InsertionSet::seiberg_local_ok(double Q) const
{
    return std::all_of(points.begin(), points.end(), [Q](const Insertion& p) { return p.alpha < Q; });
}

void InsertionSet::require_distinct() const
{
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j) {
            TorusPoint d = points[i].z - points[j].z;
            auto near0 = [](double v) { return v < 1e-14 || v > 1.0 - 1e-14; };
            if (near0(d.x1) && near0(d.x2))
                throw Error(ErrorKind::DuplicateInsertion, "insertions " + std::to_string(i) + " and " +
                                                               std::to_string(j) + " coincide");
        }
}

InsertionSet parse_insertions(const std::string& text)
{
    InsertionSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::stringstream is(item);
        std::string tok;
        std::vector<double> v;
        while (std::getline(is, tok, ',')) {
            try {
                size_t pos = 0;
                v.push_back(std::stod(tok, &pos));
                if (tok.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw Error(ErrorKind::InvalidArgument, "bad insertion entry '" + item + "'");
            }
        }
        if (v.size() != 3) throw Error(ErrorKind::InvalidArgument, "insertion needs x1,x2,alpha: '" + item + "'");
        out.points.push_back({TorusPoint(v[0], v[1]), v[2]});
    }
    return out;
}

void MonteCarloConfig::validate() const
{
    if (replicas < 1) throw Error(ErrorKind::InvalidArgument, "replicas must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw Error(ErrorKind::InvalidArgument, "ci_level must lie in (0,1)");
    if (batch < 0 || threads < 0) throw Error(ErrorKind::InvalidArgument, "batch and threads must be >= 0");
}

double insertion_potential(ComplexUH tau, const InsertionSet& ins, TorusPoint x)
{
    double h = 0.0;
    for (const auto& p : ins.points) h += p.alpha * green(tau, x - p.z);
    return h;
}

double insertion_constant(ComplexUH tau, const InsertionSet& ins, double Q)
{
    ins.require_distinct();
    double pair = 0.0, sq = 0.0;
    const auto& P = ins.points;
    for (size_t i = 0; i < P.size(); ++i) {
        sq += P[i].alpha * P[i].alpha;
        for (size_t j = i + 1; j < P.size(); ++j) pair += P[i].alpha * P[j].alpha * green(tau, P[i].z - P[j].z);
    }
    return pair + 0.5 * theta_const(tau) * sq - 0.5 * Q * std::log(tau.im) * ins.alpha_sum();
}

RealGrid regularized_insertion_potential(ComplexUH tau, const InsertionSet& ins, int N, int G, double eps)
{
    C2RTransform t(G);
    if (G <= 2 * N) throw Error(ErrorKind::InvalidArgument, "grid must exceed 2N");
    for (auto [n, m] : shell_ordered_modes(N)) {
        double j = circle_multiplier(tau, n, m, eps);
        double k = green_coefficient(tau, n, m) * j * j;
        cplx h = 0.0;
        for (const auto& p : ins.points) h += p.alpha * std::polar(1.0, -kTwoPi * (n * p.z.x1 + m * p.z.x2));
        t.put(n, m, k * h);
    }
    t.execute();
    RealGrid g(G);
    std::copy(t.out(), t.out() + size_t(G) * G, g.values.begin());
    return g;
}

namespace {

void check_sum(const InsertionSet& ins)
{
    if (!ins.seiberg_sum_ok())
        throw Error(ErrorKind::SeibergViolationSum,
                    "sum of alpha_i = " + std::to_string(ins.alpha_sum()) + " <= 0; the partition function diverges");
}

// chaos functional for one field sample
double functional(const RealGrid& X, const RealGrid& H, double sigma2, ComplexUH tau, double gamma, double eps)
{
    const double area = tau.im / (double(X.size) * X.size);
    double pre, shift;
    if (gamma == 2.0) {
        pre = std::sqrt(kPi / 2.0) * std::exp(2.0 * theta_const(tau) - 2.0 * std::log(tau.im)) *
              std::sqrt(std::log(1.0 / eps)) * area;
        shift = 2.0 * sigma2;
    } else {
        pre = chaos_prefactor(tau, gamma) * area;
        shift = 0.5 * gamma * gamma * sigma2;
    }
    double s = 0.0;
    for (size_t i = 0; i < X.values.size(); ++i) s += std::exp(gamma * (X.values[i] + H.values[i]) - shift);
    return pre * s;
}

}  // namespace

std::vector<double> chaos_functional_samples(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                             const MonteCarloConfig& mc, const Discretization& disc)
{
    mc.validate();
    const int N = disc.cutoff, G = disc.grid_size();
    const double eps = default_eps(tau, N);
    RealGrid H = regularized_insertion_potential(tau, ins, N, G, eps);
    std::vector<double> A(mc.replicas);
    const int workers = std::max(1, mc.threads);
    parallel_for(workers, workers, [&](int w) {
        int lo = int(int64_t(mc.replicas) * w / workers), hi = int(int64_t(mc.replicas) * (w + 1) / workers);
        GffGridSampler gff(tau, N, G, eps);
        RealGrid X;
        for (int r = lo; r < hi; ++r) {
            RngStream rng(mc.seed, uint64_t(r));
            gff.sample(rng, X);
            A[r] = functional(X, H, gff.point_variance(), tau, p.gamma, eps);
        }
    });
    return A;
}

std::pair<double, double> negative_moment(const std::vector<double>& A, double exponent)
{
    const size_t n = A.size();
    if (n == 0) return {0.0, 0.0};
    double mean = 0.0;
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) mean += (v[i] = std::pow(A[i], -exponent));
    mean /= double(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double se = n > 1 ? std::sqrt(ss / double(n - 1) / double(n)) : 0.0;
    return {mean, se};
}

double partition_prefactor(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins)
{
    const double s = ins.alpha_sum();
    const double k = s / p.gamma;
    return free_field_partition(tau) * std::exp(insertion_constant(tau, ins, p.Q)) / p.gamma *
           std::pow(p.mu, -k) * std::tgamma(k);
}

PartitionEstimate partition_from_samples(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                         const std::vector<double>& A)
{
    check_sum(ins);
    PartitionEstimate e;
    auto [m, se] = negative_moment(A, ins.alpha_sum() / p.gamma);
    e.moment = m;
    e.moment_se = se;
    e.replicas = int(A.size());
    e.prefactor = partition_prefactor(p, tau, ins);
    e.value = e.prefactor * m;
    e.std_error = e.prefactor * se;
    return e;
}

PartitionEstimate partition_function(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                     const MonteCarloConfig& mc, const Discretization& disc)
{
    ins.require_distinct();
    check_sum(ins);
    if (mc.replicas < 100) throw Error(ErrorKind::InvalidArgument, "partition estimates need >= 100 replicas");
    if (!ins.seiberg_local_ok(p.Q)) {
        PartitionEstimate e;
        std::ostringstream os;
        os << "SeibergViolationLocal: some alpha_i >= Q = " << p.Q << "; the partition function vanishes";
        e.diagnostic = os.str();
        return e;
    }
    return partition_from_samples(p, tau, ins, chaos_functional_samples(p, tau, ins, mc, disc));
}

double weyl_anomaly_factor(const SpectralField& phi, double Q)
{
    return std::exp(weyl_log_coefficient(Q) * dirichlet_energy_coefficients(phi));
}

double c_integral_quadrature(double A, double s, double gamma, double mu)
{
    // in t = gamma c + ln(mu A) the integrand is e^{(s/gamma)(t - ln mu A)} exp(-e^t) / gamma
    const double k = s / gamma, L = std::log(mu * A);
    auto f = [&](double t) { return std::exp(k * (t - L) - std::exp(t)) / gamma; };
    double lo = -45.0 / k, hi = 5.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-14);
}

double c_integral_closed_form(double A, double s, double gamma, double mu)
{
    const double k = s / gamma;
    return std::pow(mu * A, -k) * std::tgamma(k) / gamma;
}

LiouvilleSampler::LiouvilleSampler(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                   const Discretization& disc)
    : p_(p), tau_(tau), ins_(ins), s_(ins.alpha_sum()),
      gff_(tau, disc.cutoff, disc.grid_size(), default_eps(tau, disc.cutoff))
{
    ins.require_distinct();
    check_sum(ins);
    if (!ins.seiberg_local_ok(p.Q))
        throw Error(ErrorKind::SeibergViolationLocal, "some alpha_i >= Q; the Liouville measure is trivial");
    H_ = regularized_insertion_potential(tau, ins, disc.cutoff, disc.grid_size(), gff_.eps());
}

LiouvilleSample LiouvilleSampler::sample(RngStream& rng, std::optional<double> y_volume)
{
    gff_.sample(rng, X_);
    const double A = functional(X_, H_, gff_.point_variance(), tau_, p_.gamma, gff_.eps());
    LiouvilleSample out;
    out.chaos_functional = A;
    out.weight = std::pow(A, -s_ / p_.gamma);
    out.volume = y_volume ? *y_volume : rng.gamma(s_ / p_.gamma, p_.mu);
    if (!(out.volume > 0.0)) throw Error(ErrorKind::InvalidArgument, "volume must be positive");
    out.c = std::log(out.volume / A) / p_.gamma;

    const int G = X_.size;
    out.field = RealGrid(G);
    out.measure = RealGrid(G);
    const double shift = field_shift();
    const double area = tau_.im / (double(G) * G);
    double pre, vshift;
    if (p_.gamma == 2.0) {
        pre = std::sqrt(kPi / 2.0) * std::exp(2.0 * theta_const(tau_) - 2.0 * std::log(tau_.im)) *
              std::sqrt(std::log(1.0 / gff_.eps())) * area;
        vshift = 2.0 * gff_.point_variance();
    } else {
        pre = chaos_prefactor(tau_, p_.gamma) * area;
        vshift = 0.5 * p_.gamma * p_.gamma * gff_.point_variance();
    }
    double tot = 0.0;
    for (size_t i = 0; i < X_.values.size(); ++i) {
        out.field.values[i] = out.c + X_.values[i] + H_.values[i] + shift;
        tot += out.measure.values[i] = pre * std::exp(p_.gamma * (X_.values[i] + H_.values[i]) - vshift);
    }
    // normalise by the realised sum so the total is y up to rounding
    const double scale = out.volume / tot;
    for (double& v : out.measure.values) v *= scale;
    return out;
}

LiouvilleSample liouville_field_law_sampler(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                            std::optional<double> y_volume, RngStream& rng,
                                            const Discretization& disc)
{
    LiouvilleSampler s(p, tau, ins, disc);
    return s.sample(rng, y_volume);
}

}  // namespace torus_lqg
