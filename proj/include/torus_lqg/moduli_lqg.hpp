#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torus_lqg/lqft.hpp"

namespace torus_lqg {

enum class MatterKind { PureGravity, Ising, FreeFieldPower };

struct MatterCFT {
    MatterKind kind = MatterKind::PureGravity;
    double central_charge = 0.0;

    static MatterCFT pure_gravity() { return {MatterKind::PureGravity, 0.0}; }
    static MatterCFT ising() { return {MatterKind::Ising, 0.5}; }
    static MatterCFT free_field_power(double c);
    std::string name() const;  // "pure", "ising", "ffpower:<c>"
};

// accepts the names produced by MatterCFT::name
MatterCFT parse_matter(const std::string& s);

// KPZ: (sqrt(25 - c) - sqrt(1 - c)) / sqrt 6
double gamma_from_central_charge(double c_m);
// Seiberg-admissible root of delta + (a/2)(Q - a/2) = 1
double alpha_from_matter_weight(double delta_m, double Q);

// |eta|^4 / (2 Im tau)
double ghost_partition(ComplexUH tau);
double matter_partition(const MatterCFT& matter, ComplexUH tau);

// Everything that fixes a modulus-law computation.  Insertions carry the
// vertex weights alpha_i; the moment estimator uses disc and mc.
struct ModulusSetup {
    MatterCFT matter;
    LQFTParams params;
    InsertionSet ins;
    Discretization disc{16, 64};
    MonteCarloConfig mc{2000, 1, 0, 0.95, 1};
    int grid_u = 12;
    int grid_v = 12;
    double t_max = 10.0;
};

// n identity insertions (alpha = gamma) at distinct grid nodes, gamma from
// KPZ.  Refuses c_m = 1, where alpha = gamma = Q sits on the Seiberg bound.
ModulusSetup make_modulus_setup(const MatterCFT& matter, double mu, int n);

// Persistent table of chaos-functional moments.  One JSON file in the cache
// directory, replaced atomically on every store.
class MomentCache {
public:
    struct Record {
        std::string config_hash;
        double tau_re = 0.0, tau_im = 0.0;
        double moment = 0.0, se = 0.0;
        int replicas = 0;
    };

    explicit MomentCache(std::string dir = "");  // "" -> TORUS_LQG_CACHE_DIR or ./.torus_lqg_cache
    const std::string& path() const { return file_; }
    std::optional<Record> lookup(const std::string& hash) const;
    void store(const Record& r);
    size_t size() const;

    // FNV-1a of the canonical JSON of everything the moment depends on
    static std::string key(const ModulusSetup& s, ComplexUH tau);

private:
    std::string dir_, file_;
};

struct DensityPoint {
    double value = 0.0, se = 0.0;
    double moment = 0.0, moment_se = 0.0;
    bool cached = false;
};

// unnormalised density w.r.t. d^2 tau / Im^2 at tau in the fundamental domain:
//   E[A^{-s/gamma}] e^{C} Z_matter Im^n sqrt(Im) |eta|^2
DensityPoint modulus_density(const ModulusSetup& s, ComplexUH tau, MomentCache* cache = nullptr);
// the deterministic factors, without the moment and e^C
double modulus_density_analytic(const MatterCFT& matter, ComplexUH tau, int n);

// Table over the fundamental domain in coordinates (u, t) in [-1/2,1/2]x[0,1]:
// tau = u + i Y(u,t), Y linear from sqrt(1-u^2) to 2 on [0, t_split], then
// geometric from 2 to t_max.
class DensityTable {
public:
    static DensityTable build(const ModulusSetup& s, MomentCache* cache = nullptr,
                              const std::function<void(int, int)>& progress = {});

    int nu() const { return nu_; }
    int nv() const { return nv_; }
    double u(int i) const;
    double t(int k) const;
    ComplexUH tau(int i, int k) const;
    double Y(double u, double t) const;
    double dY_dt(double u, double t) const;

    const DensityPoint& at(int i, int k) const { return pts_[size_t(i) * nv_ + k]; }
    // probability of each (u,t) cell under the bilinear interpolant, row-major i*(nv-1)+k
    const std::vector<double>& cell_probabilities() const { return cellp_; }
    int cell_of(ComplexUH tau) const;  // -1 outside the table
    double tail_mass() const { return tail_; }  // fraction beyond t_max
    double t_max() const { return t_max_; }

    // inverse-CDF over cells, exact bilinear sampling within a cell
    ComplexUH sample(RngStream& rng) const;

private:
    int nu_ = 0, nv_ = 0, ksplit_ = 0;
    double t_max_ = 0.0, tail_ = 0.0;
    std::vector<DensityPoint> pts_;
    std::vector<double> corners_, cellp_, cdf_;  // corners_: 4 per cell, density w.r.t. du dt
};

// Samples tau from a table built for s; throws TruncationTooTight if the
// table's tail mass exceeds 1e-3.
std::vector<ComplexUH> sample_modulus(const DensityTable& table, int count, RngStream& rng);

struct JointSample {
    ComplexUH tau;
    double volume = 0.0;
    double weight = 0.0;        // importance weight A^{-s/gamma} of the measure
    double measure_mass = 0.0;  // total mass of the returned measure
    double max_cell_fraction = 0.0;
};

// tau from the table, volume from Gamma(s/gamma, mu), measure from the
// fixed-volume conditional sampler.  on_measure (optional) sees each measure grid.
std::vector<JointSample> joint_law_sampler(const ModulusSetup& s, const DensityTable& table, int count,
                                           uint64_t seed,
                                           const std::function<void(int, const RealGrid&)>& on_measure = {});

}  // namespace torus_lqg
