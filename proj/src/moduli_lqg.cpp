#include "torus_lqg/moduli_lqg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include <unistd.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>

#include "torus_lqg/special_fn.hpp"

namespace torus_lqg {

namespace fs = std::filesystem;
using nlohmann::json;

MatterCFT MatterCFT::free_field_power(double c)
{
    if (c > 1.0) throw Error(ErrorKind::InvalidCentralCharge, "matter central charge must be <= 1");
    return {MatterKind::FreeFieldPower, c};
}

std::string MatterCFT::name() const
{
    switch (kind) {
    case MatterKind::PureGravity: return "pure";
    case MatterKind::Ising: return "ising";
    default: {
        std::ostringstream os;
        os << "ffpower:" << central_charge;
        return os.str();
    }
    }
}

MatterCFT parse_matter(const std::string& s)
{
    if (s == "pure" || s == "pure_gravity") return MatterCFT::pure_gravity();
    if (s == "ising") return MatterCFT::ising();
    if (s.rfind("ffpower:", 0) == 0) {
        try {
            size_t pos = 0;
            double c = std::stod(s.substr(8), &pos);
            if (pos == s.size() - 8) return MatterCFT::free_field_power(c);
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown matter '" + s + "' (pure | ising | ffpower:<c>)");
}

double gamma_from_central_charge(double c_m)
{
    if (!(c_m <= 1.0)) throw Error(ErrorKind::InvalidCentralCharge, "KPZ relation needs c_m <= 1");
    return (std::sqrt(25.0 - c_m) - std::sqrt(1.0 - c_m)) / std::sqrt(6.0);
}

double alpha_from_matter_weight(double delta_m, double Q)
{
    double disc = Q * Q + 4.0 * delta_m - 4.0;
    if (disc < 0.0) throw Error(ErrorKind::NoAdmissibleRoot, "no real alpha solves the matter KPZ equation");
    if (disc == 0.0)
        throw Error(ErrorKind::NoAdmissibleRoot, "double root alpha = Q sits on the Seiberg bound");
    return Q - std::sqrt(disc);
}

double ghost_partition(ComplexUH tau)
{
    double e = std::norm(dedekind_eta(tau));
    return e * e / (2.0 * tau.im);
}

double matter_partition(const MatterCFT& matter, ComplexUH tau)
{
    switch (matter.kind) {
    case MatterKind::PureGravity: return 1.0;
    case MatterKind::Ising: {
        cplx two_eta = 2.0 * dedekind_eta(tau);
        double z = 0.0;
        for (int k = 2; k <= 4; ++k) z += std::abs(theta_aux(k, tau) / two_eta);
        return z;
    }
    default: return std::pow(free_field_partition(tau), matter.central_charge);
    }
}

ModulusSetup make_modulus_setup(const MatterCFT& matter, double mu, int n)
{
    if (matter.central_charge >= 1.0)
        throw Error(ErrorKind::InvalidCentralCharge,
                    "c_m = 1 gives alpha = gamma = Q, which violates the Seiberg bound; the modulus law is not "
                    "defined there (critical chaos itself stays available)");
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one insertion");
    ModulusSetup s;
    s.matter = matter;
    s.params = LQFTParams(gamma_from_central_charge(matter.central_charge), mu);
    const double alpha = alpha_from_matter_weight(0.0, s.params.Q);
    const int G = s.disc.grid_size();
    for (int k = 0; k < n; ++k) {
        // spread along the diagonal, snapped to grid nodes
        double x = std::round(double(k) / n * G) / G;
        s.ins.points.push_back({TorusPoint(x, x), alpha});
    }
    s.ins.require_distinct();
    return s;
}

// ---- moment cache

namespace {

std::mutex g_cache_mu;

std::string fnv1a_hex(const std::string& text)
{
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json read_cache_file(const std::string& file)
{
    std::ifstream in(file);
    if (!in) return json::object();
    try {
        json j = json::parse(in);
        if (j.is_object()) return j;
    } catch (const json::exception&) {
    }
    return json::object();  // unreadable files are treated as empty and get replaced
}

}  // namespace

MomentCache::MomentCache(std::string dir)
{
    if (dir.empty()) {
        const char* env = std::getenv("TORUS_LQG_CACHE_DIR");
        dir = (env && *env) ? env : ".torus_lqg_cache";
    }
    dir_ = dir;
    file_ = (fs::path(dir_) / "moment_cache.json").string();
}

std::string MomentCache::key(const ModulusSetup& s, ComplexUH tau)
{
    json j;
    j["format"] = 1;
    j["gamma"] = s.params.gamma;
    json ins = json::array();
    for (const auto& p : s.ins.points) ins.push_back({p.z.x1, p.z.x2, p.alpha});
    j["insertions"] = ins;
    j["tau"] = {tau.re, tau.im};
    j["cutoff"] = s.disc.cutoff;
    j["grid"] = s.disc.grid_size();
    j["replicas"] = s.mc.replicas;
    j["seed"] = s.mc.seed;
    return fnv1a_hex(j.dump());
}

std::optional<MomentCache::Record> MomentCache::lookup(const std::string& hash) const
{
    std::lock_guard<std::mutex> lk(g_cache_mu);
    json j = read_cache_file(file_);
    auto it = j.find(hash);
    if (it == j.end()) return std::nullopt;
    try {
        Record r;
        r.config_hash = hash;
        r.tau_re = it->at("tau").at(0).get<double>();
        r.tau_im = it->at("tau").at(1).get<double>();
        r.moment = it->at("moment").get<double>();
        r.se = it->at("se").get<double>();
        r.replicas = it->at("replicas").get<int>();
        return r;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

void MomentCache::store(const Record& r)
{
    std::lock_guard<std::mutex> lk(g_cache_mu);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    json j = read_cache_file(file_);
    j[r.config_hash] = {{"config_hash", r.config_hash},
                        {"tau", {r.tau_re, r.tau_im}},
                        {"moment", r.moment},
                        {"se", r.se},
                        {"replicas", r.replicas}};
    const std::string tmp = file_ + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write moment cache " + tmp);
        out << j.dump(1) << "\n";
        if (!out) throw Error(ErrorKind::Io, "cannot write moment cache " + tmp);
    }
    fs::rename(tmp, file_, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot replace moment cache " + file_ + ": " + ec.message());
}

size_t MomentCache::size() const
{
    std::lock_guard<std::mutex> lk(g_cache_mu);
    return read_cache_file(file_).size();
}

// ---- density

double modulus_density_analytic(const MatterCFT& matter, ComplexUH tau, int n)
{
    return matter_partition(matter, tau) * std::pow(tau.im, n) * std::sqrt(tau.im) * std::norm(dedekind_eta(tau));
}

DensityPoint modulus_density(const ModulusSetup& s, ComplexUH tau, MomentCache* cache)
{
    if (!in_fundamental_domain(tau, 1e-9))
        throw Error(ErrorKind::InvalidArgument, "modulus density is evaluated on the fundamental domain only");
    if (!s.ins.seiberg_sum_ok())
        throw Error(ErrorKind::SeibergViolationSum, "sum of alpha_i must be positive");
    if (!s.ins.seiberg_local_ok(s.params.Q))
        throw Error(ErrorKind::SeibergViolationLocal, "some alpha_i >= Q");

    DensityPoint d;
    const std::string key = MomentCache::key(s, tau);
    std::optional<MomentCache::Record> rec;
    if (cache) rec = cache->lookup(key);
    if (rec) {
        d.moment = rec->moment;
        d.moment_se = rec->se;
        d.cached = true;
    } else {
        MonteCarloConfig mc = s.mc;
        auto A = chaos_functional_samples(s.params, tau, s.ins, mc, s.disc);
        auto [m, se] = negative_moment(A, s.ins.alpha_sum() / s.params.gamma);
        d.moment = m;
        d.moment_se = se;
        if (cache) cache->store({key, tau.re, tau.im, m, se, mc.replicas});
    }
    const int n = int(s.ins.points.size());
    const double f = std::exp(insertion_constant(tau, s.ins, s.params.Q)) * modulus_density_analytic(s.matter, tau, n);
    d.value = d.moment * f;
    d.se = d.moment_se * f;
    return d;
}

// ---- table

double DensityTable::u(int i) const { return -0.5 + double(i) / (nu_ - 1); }
double DensityTable::t(int k) const { return double(k) / (nv_ - 1); }

double DensityTable::Y(double u, double t) const
{
    const double ts = double(ksplit_) / (nv_ - 1);
    const double y0 = std::sqrt(1.0 - u * u);
    if (t <= ts) return y0 + (2.0 - y0) * t / ts;
    return 2.0 * std::pow(t_max_ / 2.0, (t - ts) / (1.0 - ts));
}

double DensityTable::dY_dt(double u, double t) const
{
    const double ts = double(ksplit_) / (nv_ - 1);
    if (t <= ts) return (2.0 - std::sqrt(1.0 - u * u)) / ts;
    return Y(u, t) * std::log(t_max_ / 2.0) / (1.0 - ts);
}

ComplexUH DensityTable::tau(int i, int k) const
{
    double uu = u(i);
    return ComplexUH(uu, Y(uu, t(k)));
}

int DensityTable::cell_of(ComplexUH tau) const
{
    const double uu = tau.re;
    if (uu < -0.5 - 1e-12 || uu > 0.5 + 1e-12) return -1;
    const double ts = double(ksplit_) / (nv_ - 1);
    const double y0 = std::sqrt(std::max(0.0, 1.0 - uu * uu));
    double tt;
    if (tau.im <= 2.0)
        tt = ts * (tau.im - y0) / (2.0 - y0);
    else
        tt = ts + (1.0 - ts) * std::log(tau.im / 2.0) / std::log(t_max_ / 2.0);
    if (tt < -1e-12 || tt > 1.0 + 1e-12) return -1;
    int i = std::clamp(int(std::floor((uu + 0.5) * (nu_ - 1))), 0, nu_ - 2);
    int k = std::clamp(int(std::floor(tt * (nv_ - 1) + 1e-12)), 0, nv_ - 2);
    // points exactly on the split row belong to the cell below when they came from it
    return i * (nv_ - 1) + k;
}

DensityTable DensityTable::build(const ModulusSetup& s, MomentCache* cache,
                                 const std::function<void(int, int)>& progress)
{
    if (s.grid_u < 2 || s.grid_v < 3) throw Error(ErrorKind::InvalidArgument, "density grid needs >= 2 x 3 nodes");
    if (!(s.t_max > 2.0)) throw Error(ErrorKind::InvalidArgument, "t_max must exceed 2");
    DensityTable T;
    T.nu_ = s.grid_u;
    T.nv_ = s.grid_v;
    T.ksplit_ = std::max(1, (s.grid_v - 1) / 2);
    T.t_max_ = s.t_max;
    T.pts_.resize(size_t(T.nu_) * T.nv_);

    const int total = T.nu_ * T.nv_;
    const int workers = std::max(1, s.mc.threads);
    ModulusSetup inner = s;
    inner.mc.threads = 1;
    std::mutex pm;
    int done = 0;
    parallel_for(total, workers, [&](int idx) {
        int i = idx / T.nv_, k = idx % T.nv_;
        T.pts_[idx] = modulus_density(inner, T.tau(i, k), cache);
        if (progress) {
            std::lock_guard<std::mutex> lk(pm);
            progress(++done, total);
        }
    });

    // corner densities w.r.t. du dt; the Jacobian is one-sided at the split row
    const int cu = T.nu_ - 1, cv = T.nv_ - 1;
    T.corners_.resize(size_t(cu) * cv * 4);
    T.cellp_.resize(size_t(cu) * cv);
    double mass = 0.0;
    for (int i = 0; i < cu; ++i)
        for (int k = 0; k < cv; ++k) {
            const double tmid = (T.t(k) + T.t(k + 1)) / 2.0;
            double* c = &T.corners_[(size_t(i) * cv + k) * 4];
            int q = 0;
            for (int di = 0; di < 2; ++di)
                for (int dk = 0; dk < 2; ++dk) {
                    ComplexUH tau = T.tau(i + di, k + dk);
                    double uu = T.u(i + di);
                    double jac = (tmid <= double(T.ksplit_) / cv)
                                     ? (2.0 - std::sqrt(1.0 - uu * uu)) / (double(T.ksplit_) / cv)
                                     : tau.im * std::log(T.t_max_ / 2.0) / (1.0 - double(T.ksplit_) / cv);
                    c[q++] = std::max(0.0, T.at(i + di, k + dk).value) / (tau.im * tau.im) * jac;
                }
            // c[0]=(i,k) c[1]=(i,k+1) c[2]=(i+1,k) c[3]=(i+1,k+1)
            double m = (c[0] + c[1] + c[2] + c[3]) / 4.0 / (double(cu) * cv);
            T.cellp_[size_t(i) * cv + k] = m;
            mass += m;
        }
    if (!(mass > 0.0)) throw Error(ErrorKind::NonConvergence, "density table has no mass");

    // Tail beyond t_max: the analytic factors carry the decay; the remaining
    // ratio (moment times e^C) is extrapolated as kappa(u) y^p with p fitted
    // on the top two rows.
    const int n = int(s.ins.points.size());
    auto F = [&](double uu, double y) { return modulus_density_analytic(s.matter, ComplexUH(uu, y), n); };
    double psum = 0.0;
    int pcount = 0;
    std::vector<double> kappa(T.nu_);
    for (int i = 0; i < T.nu_; ++i) {
        ComplexUH a = T.tau(i, cv), b = T.tau(i, cv - 1);
        double ra = T.at(i, cv).value / F(a.re, a.im), rb = T.at(i, cv - 1).value / F(b.re, b.im);
        kappa[i] = std::max(0.0, ra);
        if (ra > 0.0 && rb > 0.0) {
            psum += std::log(ra / rb) / std::log(a.im / b.im);
            ++pcount;
        }
    }
    const double p = pcount ? psum / pcount : 0.0;
    const double rate = kPi * (1.0 - s.matter.central_charge) / 6.0;
    const double L = std::min(40.0 / rate, 1500.0);
    std::vector<double> tail_u(T.nu_);
    for (int i = 0; i < T.nu_; ++i) {
        const double uu = T.u(i);
        auto f = [&](double y) { return std::pow(y / T.t_max_, p) * F(uu, y) / (y * y); };
        tail_u[i] = kappa[i] * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                   f, T.t_max_, T.t_max_ + L, 15, 1e-10);
    }
    double tail = 0.0;
    for (int i = 0; i + 1 < T.nu_; ++i) tail += 0.5 * (tail_u[i] + tail_u[i + 1]) / (T.nu_ - 1);
    T.tail_ = tail / (mass + tail);

    T.cdf_.resize(T.cellp_.size());
    double acc = 0.0;
    for (size_t c = 0; c < T.cellp_.size(); ++c) {
        T.cellp_[c] /= mass;
        acc += T.cellp_[c];
        T.cdf_[c] = acc;
    }
    T.cdf_.back() = 1.0;
    return T;
}

namespace {

// draw from the density proportional to m0 (1 - x) + m1 x on [0,1]
double linear_draw(double m0, double m1, double U)
{
    if (m0 + m1 <= 0.0) return U;
    return U * (m0 + m1) / (m0 + std::sqrt(m0 * m0 + (m1 * m1 - m0 * m0) * U));
}

}  // namespace

ComplexUH DensityTable::sample(RngStream& rng) const
{
    const int cv = nv_ - 1;
    const double U = rng.uniform();
    size_t c = size_t(std::lower_bound(cdf_.begin(), cdf_.end(), U) - cdf_.begin());
    if (c >= cdf_.size()) c = cdf_.size() - 1;
    const int i = int(c) / cv, k = int(c) % cv;
    const double* g = &corners_[c * 4];
    const double a = linear_draw(g[0] + g[1], g[2] + g[3], rng.uniform());
    const double g0 = g[0] * (1.0 - a) + g[2] * a, g1 = g[1] * (1.0 - a) + g[3] * a;
    const double b = linear_draw(g0, g1, rng.uniform());
    const double uu = u(i) + a / (nu_ - 1);
    const double tt = t(k) + b / cv;
    return ComplexUH(uu, Y(uu, tt));
}

std::vector<ComplexUH> sample_modulus(const DensityTable& table, int count, RngStream& rng)
{
    if (table.tail_mass() > 1e-3) {
        std::ostringstream os;
        os << "estimated tail mass " << table.tail_mass() << " above Im tau = " << table.t_max()
           << " exceeds 1e-3; raise t_max";
        throw Error(ErrorKind::TruncationTooTight, os.str());
    }
    std::vector<ComplexUH> out;
    out.reserve(count);
    for (int r = 0; r < count; ++r) out.push_back(table.sample(rng));
    return out;
}

std::vector<JointSample> joint_law_sampler(const ModulusSetup& s, const DensityTable& table, int count,
                                           uint64_t seed, const std::function<void(int, const RealGrid&)>& on_measure)
{
    RngStream trng(seed, 0);
    auto taus = sample_modulus(table, count, trng);
    std::vector<JointSample> out(count);
    const double shape = s.ins.alpha_sum() / s.params.gamma;
    for (int r = 0; r < count; ++r) {
        RngStream rng(seed, uint64_t(r) + 1);
        JointSample& js = out[r];
        js.tau = taus[r];
        js.volume = rng.gamma(shape, s.params.mu);
        LiouvilleSampler ls(s.params, js.tau, s.ins, s.disc);
        LiouvilleSample smp = ls.sample(rng, js.volume);
        js.weight = smp.weight;
        double tot = 0.0, mx = 0.0;
        for (double v : smp.measure.values) {
            tot += v;
            mx = std::max(mx, v);
        }
        js.measure_mass = tot;
        js.max_cell_fraction = tot > 0 ? mx / tot : 0.0;
        if (on_measure) on_measure(r, smp.measure);
    }
    return out;
}

}  // namespace torus_lqg
