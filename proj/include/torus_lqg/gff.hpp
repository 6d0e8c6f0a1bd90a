#pragma once

#include <array>
#include <functional>
#include <vector>

#include "torus_lqg/fft.hpp"
#include "torus_lqg/modular_group.hpp"
#include "torus_lqg/rng.hpp"
#include "torus_lqg/types.hpp"

namespace torus_lqg {

// Real field on the torus given by Fourier coefficients f_{n,m}, |n|,|m| <= N,
// f_{-n,-m} = conj f_{n,m}, f_{0,0} = 0.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(ComplexUH tau, int N);

    ComplexUH tau() const { return tau_; }
    int cutoff() const { return N_; }

    cplx coeff(long n, long m) const;
    // sets (n,m) and its mirror
    void set(long n, long m, cplx v);

    double value_at(TorusPoint x) const;  // direct sum
    RealGrid to_grid(int G = 0) const;    // G = 0 means 4N

    // pointwise variance of the Gaussian law the field was drawn from (if any)
    double point_variance = 0.0;
    double eps = 0.0;  // circle-average radius already applied

private:
    size_t idx(long n, long m) const { return size_t(n + N_) * (2 * N_ + 1) + size_t(m + N_); }
    ComplexUH tau_;
    int N_ = 0;
    std::vector<cplx> c_;
};

// J0(2 pi eps |n tau - m| / Im tau): exact angular average of the (n,m) plane
// wave over the metric circle of radius eps
double circle_multiplier(ComplexUH tau, long n, long m, double eps);
// sum over the box of c_{n,m} J0^2 (eps = 0: plain truncated variance)
double spectral_variance(ComplexUH tau, int N, double eps = 0.0);
// sum over the box of c_{n,m} J0^2 cos(2 pi (n x1 + m x2))
double spectral_covariance(ComplexUH tau, int N, TorusPoint x, double eps = 0.0);

SpectralField sample_gff(ComplexUH tau, int N, RngStream& rng);
SpectralField circle_average(const SpectralField& field, double eps);

double free_field_partition(ComplexUH tau);

// Draws circle-averaged GFF samples straight onto a G x G grid.  Modes are
// drawn shell by shell (max(|n|,|m|) increasing), so the same stream gives
// nested truncations.
class GffGridSampler {
public:
    GffGridSampler(ComplexUH tau, int N, int G = 0, double eps = 0.0);
    int grid() const { return G_; }
    int cutoff() const { return N_; }
    ComplexUH tau() const { return tau_; }
    double eps() const { return eps_; }
    double point_variance() const { return var_; }
    void sample(RngStream& rng, RealGrid& out);
    void sample_field(RngStream& rng, SpectralField& out) const;

private:
    struct Mode {
        int n, m;
        double amp;
    };
    ComplexUH tau_;
    int N_, G_;
    double eps_, var_ = 0.0;
    std::vector<Mode> modes_;
    C2RTransform fft_;
};

// half-lattice (n > 0, or n = 0 and m > 0) ordered by shell
std::vector<std::array<int, 2>> shell_ordered_modes(int N);

struct LogConformalFactor {
    struct Entry {
        long n, m;
        cplx value;  // phi_{n,m} at the reduced modulus
    };
    std::vector<Entry> entries;  // one per +-(n,m) pair
};

SpectralField build_log_conformal_factor(const LogConformalFactor& spec, ComplexUH tau, int N);

// 2 pi sum |phi_{n,m}|^2 = 2 pi sum |f_{n,m}|^2 / c_{n,m}
double dirichlet_energy_coefficients(const SpectralField& f);
// quadrature of |grad f|^2 over the flat torus using spectral derivatives on a grid
double dirichlet_energy_grid(const SpectralField& f, int G = 0);

}  // namespace torus_lqg
