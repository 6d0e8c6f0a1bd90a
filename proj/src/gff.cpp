#include "torus_lqg/gff.hpp"

#include <algorithm>
#include <cmath>

#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/torus_green.hpp"

namespace torus_lqg {

SpectralField::SpectralField(ComplexUH tau, int N) : tau_(tau), N_(N)
{
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "cutoff must be >= 1");
    c_.assign(size_t(2 * N + 1) * (2 * N + 1), cplx(0.0));
}

cplx SpectralField::coeff(long n, long m) const
{
    if (std::abs(n) > N_ || std::abs(m) > N_) return 0.0;
    return c_[idx(n, m)];
}

void SpectralField::set(long n, long m, cplx v)
{
    if (std::abs(n) > N_ || std::abs(m) > N_) throw Error(ErrorKind::IndexOutOfCutoff, "index outside the cutoff box");
    if (n == 0 && m == 0) {
        if (v != 0.0) throw Error(ErrorKind::InvalidArgument, "the (0,0) mode is excluded");
        return;
    }
    c_[idx(n, m)] = v;
    c_[idx(-n, -m)] = std::conj(v);
}

double SpectralField::value_at(TorusPoint x) const
{
    std::vector<cplx> e1(2 * N_ + 1), e2(2 * N_ + 1);
    for (int k = -N_; k <= N_; ++k) {
        e1[k + N_] = std::polar(1.0, kTwoPi * k * x.x1);
        e2[k + N_] = std::polar(1.0, kTwoPi * k * x.x2);
    }
    double s = 0.0;
    for (int n = -N_; n <= N_; ++n) {
        cplx row = 0.0;
        for (int m = -N_; m <= N_; ++m) row += c_[idx(n, m)] * e2[m + N_];
        s += (row * e1[n + N_]).real();
    }
    return s;
}

RealGrid SpectralField::to_grid(int G) const
{
    if (G == 0) G = 4 * N_;
    if (G <= 2 * N_) throw Error(ErrorKind::InvalidArgument, "grid must exceed 2N to avoid aliasing");
    C2RTransform t(G);
    for (int n = -N_; n <= N_; ++n)
        for (int m = 0; m <= N_; ++m) {
            if (m == 0 && n <= 0) continue;  // put() mirrors the m = 0 column
            t.put(n, m, c_[idx(n, m)]);
        }
    t.execute();
    RealGrid g(G);
    std::copy(t.out(), t.out() + size_t(G) * G, g.values.begin());
    return g;
}

double circle_multiplier(ComplexUH tau, long n, long m, double eps)
{
    if (eps == 0.0) return 1.0;
    double re = n * tau.re - m, im = n * tau.im;
    return ::j0(kTwoPi * eps * std::sqrt(re * re + im * im) / tau.im);
}

double spectral_variance(ComplexUH tau, int N, double eps)
{
    double s = 0.0;
    for (long n = 0; n <= N; ++n) {
        double row = 0.0;
        for (long m = (n == 0 ? 1 : -N); m <= N; ++m) {
            double re = n * tau.re - m, im = n * tau.im;
            double r2 = re * re + im * im;
            double c = tau.im / (kTwoPi * r2);
            if (eps > 0.0) {
                double j = ::j0(kTwoPi * eps * std::sqrt(r2) / tau.im);
                c *= j * j;
            }
            row += c;
        }
        s += row;
    }
    return 2.0 * s;
}

double spectral_covariance(ComplexUH tau, int N, TorusPoint x, double eps)
{
    double s = 0.0;
    for (long n = 0; n <= N; ++n) {
        double row = 0.0;
        for (long m = (n == 0 ? 1 : -N); m <= N; ++m) {
            double j = circle_multiplier(tau, n, m, eps);
            row += green_coefficient(tau, n, m) * j * j * std::cos(kTwoPi * (n * x.x1 + m * x.x2));
        }
        s += row;
    }
    return 2.0 * s;
}

std::vector<std::array<int, 2>> shell_ordered_modes(int N)
{
    std::vector<std::array<int, 2>> out;
    for (int s = 1; s <= N; ++s)
        for (int n = 0; n <= s; ++n)
            for (int m = -s; m <= s; ++m) {
                if (std::max(std::abs(n), std::abs(m)) != s) continue;
                if (n == 0 && m <= 0) continue;
                out.push_back({n, m});
            }
    return out;
}

SpectralField sample_gff(ComplexUH tau, int N, RngStream& rng)
{
    SpectralField f(tau, N);
    for (auto [n, m] : shell_ordered_modes(N)) f.set(n, m, std::sqrt(green_coefficient(tau, n, m)) * rng.complex_normal());
    f.point_variance = spectral_variance(tau, N);
    return f;
}

SpectralField circle_average(const SpectralField& field, double eps)
{
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    if (field.eps != 0.0) throw Error(ErrorKind::InvalidArgument, "field is already circle-averaged");
    const int N = field.cutoff();
    const ComplexUH tau = field.tau();
    SpectralField out(tau, N);
    double var = 0.0;
    for (auto [n, m] : shell_ordered_modes(N)) {
        double j = circle_multiplier(tau, n, m, eps);
        out.set(n, m, field.coeff(n, m) * j);
        var += green_coefficient(tau, n, m) * j * j;
    }
    out.point_variance = 2.0 * var;
    out.eps = eps;
    return out;
}

double free_field_partition(ComplexUH tau)
{
    return 1.0 / (std::sqrt(tau.im) * std::norm(dedekind_eta(tau)));
}

GffGridSampler::GffGridSampler(ComplexUH tau, int N, int G, double eps)
    : tau_(tau), N_(N), G_(G == 0 ? 4 * N : G), eps_(eps), fft_(G == 0 ? 4 * N : G)
{
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "cutoff must be >= 1");
    if (G_ <= 2 * N) throw Error(ErrorKind::InvalidArgument, "grid must exceed 2N");
    double var = 0.0;
    for (auto [n, m] : shell_ordered_modes(N)) {
        double c = green_coefficient(tau, n, m);
        double j = circle_multiplier(tau, n, m, eps);
        modes_.push_back({n, m, std::sqrt(c) * j});
        var += c * j * j;
    }
    var_ = 2.0 * var;
}

void GffGridSampler::sample(RngStream& rng, RealGrid& out)
{
    fft_.clear_input();
    for (const auto& md : modes_) fft_.put(md.n, md.m, md.amp * rng.complex_normal());
    fft_.execute();
    if (out.size != G_) out = RealGrid(G_);
    std::copy(fft_.out(), fft_.out() + size_t(G_) * G_, out.values.begin());
}

void GffGridSampler::sample_field(RngStream& rng, SpectralField& out) const
{
    out = SpectralField(tau_, N_);
    for (const auto& md : modes_) out.set(md.n, md.m, md.amp * rng.complex_normal());
    out.point_variance = var_;
    out.eps = eps_;
}

SpectralField build_log_conformal_factor(const LogConformalFactor& spec, ComplexUH tau, int N)
{
    auto red = reduce_to_fundamental(tau);
    const ModularElement& psi = red.witness;  // psi(tau) = tau*
    SpectralField f(tau, N);
    for (const auto& e : spec.entries) {
        if (e.n == 0 && e.m == 0) throw Error(ErrorKind::InvalidArgument, "log-conformal factor has no (0,0) mode");
        if (e.value == 0.0) continue;
        // phi_{n,m}(tau) = phi_{n*,m*}(tau*) with (n,m) the relabelled index
        long n = psi.a * e.n - psi.c * e.m;
        long m = -psi.b * e.n + psi.d * e.m;
        if (std::abs(n) > N || std::abs(m) > N)
            throw Error(ErrorKind::IndexOutOfCutoff,
                        "relabelled index (" + std::to_string(n) + "," + std::to_string(m) + ") outside the cutoff");
        f.set(n, m, e.value * std::sqrt(green_coefficient(tau, n, m)));
    }
    return f;
}

double dirichlet_energy_coefficients(const SpectralField& f)
{
    const int N = f.cutoff();
    double s = 0.0;
    for (int n = -N; n <= N; ++n)
        for (int m = -N; m <= N; ++m) {
            if (n == 0 && m == 0) continue;
            s += std::norm(f.coeff(n, m)) / green_coefficient(f.tau(), n, m);
        }
    return kTwoPi * s;
}

double dirichlet_energy_grid(const SpectralField& f, int G)
{
    const int N = f.cutoff();
    if (G == 0) G = 4 * N;
    SpectralField d1(f.tau(), N), d2(f.tau(), N);
    for (auto [n, m] : shell_ordered_modes(N)) {
        cplx c = f.coeff(n, m);
        d1.set(n, m, cplx(0.0, kTwoPi * n) * c);
        d2.set(n, m, cplx(0.0, kTwoPi * m) * c);
    }
    RealGrid g1 = d1.to_grid(G), g2 = d2.to_grid(G);
    const double re = f.tau().re, im = f.tau().im;
    double s = 0.0;
    for (size_t i = 0; i < g1.values.size(); ++i) {
        double a = g1.values[i], b = g2.values[i] - re * a;
        s += im * a * a + b * b / im;
    }
    return s / (double(G) * G);
}

}  // namespace torus_lqg
