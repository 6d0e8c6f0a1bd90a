#pragma once

#include <cstdint>
#include <vector>

#include "torus_lqg/gff.hpp"
#include "torus_lqg/modular_group.hpp"
#include "torus_lqg/types.hpp"

namespace torus_lqg {

// Cell masses of a chaos measure on the G x G grid; cell (j,k) is centred at
// the node (j/G, k/G).
struct ChaosMeasure {
    int grid = 0;
    std::vector<double> weights;
    double gamma = 0.0;
    ComplexUH tau;
    double eps = 0.0;
    bool critical = false;
    uint64_t seed = 0;
    uint64_t stream = 0;

    double total_mass() const;
    double max_cell_fraction() const;
    double& at(int j, int k) { return weights[size_t(j) * grid + k]; }
    double at(int j, int k) const { return weights[size_t(j) * grid + k]; }
};

inline double background_charge(double gamma) { return 2.0 / gamma + gamma / 2.0; }

// sqrt(Im tau)/(2N): twice the metric grid spacing of the default 4N grid
inline double default_eps(ComplexUH tau, int N) { return std::sqrt(tau.im) / (2.0 * N); }

// exp((g^2/2) Theta - (g Q/2) ln Im tau)
double chaos_prefactor(ComplexUH tau, double gamma);
// E[M(T)] = prefactor * Im tau
double expected_total_mass(ComplexUH tau, double gamma);

// grid-level builders; X holds the circle-averaged field at the nodes and
// sigma2 its exact pointwise variance
ChaosMeasure chaos_measure_from_grid(const RealGrid& X, double sigma2, ComplexUH tau, double gamma, double eps);
ChaosMeasure critical_measure_from_grid(const RealGrid& X, double sigma2, ComplexUH tau, double eps);
// eps^2 exp(2 (X - ln Im tau)) without the (ln 1/eps)^{1/2} push
ChaosMeasure uncorrected_critical_measure_from_grid(const RealGrid& X, ComplexUH tau, double eps);

ChaosMeasure chaos_measure(const SpectralField& field_eps, double gamma, double Q, double eps, int G = 0);
ChaosMeasure critical_chaos_measure(const SpectralField& field_eps, double eps, int G = 0);

// psi~^{-1}_* M: mass of the cell at y moves to the cell at psi~^{-1}(y)
ChaosMeasure pushforward(const ChaosMeasure& m, const ModularElement& psi);

// replica helper: field sample plus measure in one go
class ChaosSampler {
public:
    ChaosSampler(ComplexUH tau, int N, double gamma, int G = 0, double eps = 0.0);
    ChaosMeasure sample(RngStream& rng);
    const RealGrid& last_field() const { return X_; }
    GffGridSampler& field_sampler() { return gff_; }
    double eps() const { return eps_; }

private:
    ComplexUH tau_;
    double gamma_, eps_;
    GffGridSampler gff_;
    RealGrid X_;
};

}  // namespace torus_lqg
