#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torus_lqg/gff.hpp"
#include "torus_lqg/gmc.hpp"
#include "torus_lqg/types.hpp"

namespace torus_lqg {

struct LQFTParams {
    double gamma = 1.0;
    double mu = 1.0;
    double Q = 2.5;

    LQFTParams() = default;
    LQFTParams(double g, double m);
};

struct Insertion {
    TorusPoint z;
    double alpha = 0.0;
};

struct InsertionSet {
    std::vector<Insertion> points;

    double alpha_sum() const;
    bool seiberg_sum_ok() const { return alpha_sum() > 0.0; }
    bool seiberg_local_ok(double Q) const;
    bool seiberg_ok(double Q) const { return seiberg_sum_ok() && seiberg_local_ok(Q); }
    void require_distinct() const;  // throws DuplicateInsertion
};

// "x1,x2,alpha;x1,x2,alpha;..."
InsertionSet parse_insertions(const std::string& text);

struct MonteCarloConfig {
    int replicas = 1000;
    uint64_t seed = 1;
    int batch = 0;          // replicas per work block, 0 = automatic
    double ci_level = 0.95;
    int threads = 1;
    void validate() const;
};

// spectral cutoff and grid for the chaos functional; eps follows default_eps
struct Discretization {
    int cutoff = 32;
    int grid = 0;  // 0 -> 4 * cutoff
    int grid_size() const { return grid == 0 ? 4 * cutoff : grid; }
};

struct PartitionEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int replicas = 0;
    double moment = 0.0;     // E[(int e^{gamma H} dM)^{-s/gamma}]
    double moment_se = 0.0;
    double prefactor = 0.0;  // everything multiplying the moment
    std::string diagnostic;
};

inline double conformal_weight(double alpha, double Q) { return 0.5 * alpha * (Q - 0.5 * alpha); }

// sum_i alpha_i G(x - z_i) with the closed-form Green function
double insertion_potential(ComplexUH tau, const InsertionSet& ins, TorusPoint x);
// sum_{i<j} a_i a_j G(z_i - z_j) + Theta/2 sum a_i^2 - Q/2 ln Im tau sum a_i
double insertion_constant(ComplexUH tau, const InsertionSet& ins, double Q);

// The potential as seen by the regularised field: sum_i alpha_i K(x - z_i) on
// the grid nodes, K = covariance of the circle-averaged truncated field.  K
// tends to G away from the diagonal and stays finite on it.
RealGrid regularized_insertion_potential(ComplexUH tau, const InsertionSet& ins, int N, int G, double eps);

// replica values of the chaos functional A = int e^{gamma H} dM_gamma;
// replica r uses RngStream(mc.seed, r)
std::vector<double> chaos_functional_samples(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                             const MonteCarloConfig& mc, const Discretization& disc);

// mean and standard error of A^{-s/gamma}
std::pair<double, double> negative_moment(const std::vector<double>& A, double exponent);

// prefactor Z^FF e^C gamma^{-1} mu^{-s/gamma} Gamma(s/gamma)
double partition_prefactor(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins);

PartitionEstimate partition_from_samples(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                         const std::vector<double>& A);
PartitionEstimate partition_function(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                     const MonteCarloConfig& mc, const Discretization& disc = {});

inline double weyl_log_coefficient(double Q) { return (1.0 + 6.0 * Q * Q) / (96.0 * kPi); }
double weyl_anomaly_factor(const SpectralField& phi, double Q);

// int e^{s c} exp(-mu e^{gamma c} A) dc by quadrature, for checking the closed form
double c_integral_quadrature(double A, double s, double gamma, double mu);
double c_integral_closed_form(double A, double s, double gamma, double mu);

struct LiouvilleSample {
    RealGrid field;    // c + X + H - (Q/2) ln Im tau at the nodes
    RealGrid measure;  // cell masses of y e^{gamma H} dM / A
    double weight = 0.0;  // A^{-s/gamma}
    double volume = 0.0;  // y
    double c = 0.0;
    double chaos_functional = 0.0;  // A
};

// One weighted sample of the Liouville field and measure.  Without a fixed
// volume, y is drawn from Gamma(s/gamma, mu).
class LiouvilleSampler {
public:
    LiouvilleSampler(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins, const Discretization& disc = {});
    LiouvilleSample sample(RngStream& rng, std::optional<double> y_volume = std::nullopt);
    double field_shift() const { return -0.5 * p_.Q * std::log(tau_.im); }

private:
    LQFTParams p_;
    ComplexUH tau_;
    InsertionSet ins_;
    double s_;
    GffGridSampler gff_;
    RealGrid H_, X_;
};

LiouvilleSample liouville_field_law_sampler(const LQFTParams& p, ComplexUH tau, const InsertionSet& ins,
                                            std::optional<double> y_volume, RngStream& rng,
                                            const Discretization& disc = {});

}  // namespace torus_lqg
