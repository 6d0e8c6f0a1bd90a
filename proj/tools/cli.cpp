#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "plot.hpp"
#include "torus_lqg/gmc.hpp"
#include "torus_lqg/lqft.hpp"
#include "torus_lqg/moduli_lqg.hpp"
#include "torus_lqg/special_fn.hpp"
#include "torus_lqg/torus_green.hpp"

namespace torus_lqg::cli {

using nlohmann::json;

namespace {

std::array<double, 2> parse_pair(const std::string& s, const char* what)
{
    std::array<double, 2> v{};
    std::stringstream ss(s);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " expects 're,im' or 'x1,x2', got '" + s + "'");
    try {
        size_t p1 = 0, p2 = 0;
        v[0] = std::stod(a, &p1);
        v[1] = std::stod(b, &p2);
        if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + ": cannot parse '" + s + "'");
    }
    return v;
}

ComplexUH parse_tau(const std::string& s)
{
    auto v = parse_pair(s, "--tau");
    return ComplexUH(v[0], v[1]);
}

std::string num(double v)
{
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

json jc(cplx z) { return json::array({z.real(), z.imag()}); }

// option values of the parsed subcommand, as given or defaulted
json collect_config(const CLI::App* sub)
{
    json j = json::object();
    for (const CLI::Option* o : sub->get_options()) {
        std::string name = o->get_lnames().empty() ? o->get_name() : o->get_lnames().front();
        if (name == "help" || name == "config" || name.empty()) continue;
        std::string v;
        if (o->count() > 0) {
            auto r = o->reduced_results();
            for (size_t i = 0; i < r.size(); ++i) v += (i ? "," : "") + r[i];
        } else {
            v = o->get_default_str();
        }
        if (o->get_type_size() == 0) {
            j[name] = o->count() > 0;
            continue;
        }
        // numbers stay numbers
        try {
            size_t p = 0;
            double d = std::stod(v, &p);
            if (p == v.size()) {
                j[name] = d;
                continue;
            }
        } catch (const std::exception&) {
        }
        j[name] = v;
    }
    return j;
}

class Run {
public:
    Run(std::string command, json config) : command_(std::move(command)), config_(std::move(config)),
                                            t0_(std::chrono::steady_clock::now()) {}

    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

    std::string header(const std::vector<std::string>& extra = {}) const
    {
        std::ostringstream o;
        o << "# torus-lqg " << kToolVersion << " " << command_ << "\n";
        o << "# config: " << config_.dump() << "\n";
        for (auto& e : extra) o << "# " << e << "\n";
        char b[64];
        std::snprintf(b, sizeof b, "%.3f", seconds());
        o << "# wall_clock_seconds: " << b << "\n";
        return o.str();
    }

    void write_csv(const std::string& path, const std::string& columns, const std::string& body,
                   const std::vector<std::string>& extra = {}) const
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
        f << header(extra) << columns << "\n" << body;
        if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
    }

    // JSON result; the wall-clock field sits on its own line
    void emit_json(json result, std::ostream& out, const std::string& path = "") const
    {
        json j;
        j["tool"] = std::string("torus-lqg ") + kToolVersion;
        j["command"] = command_;
        j["config"] = config_;
        j["result"] = std::move(result);
        j["wall_clock_seconds"] = std::round(seconds() * 1000.0) / 1000.0;
        std::string text = j.dump(2) + "\n";
        if (path.empty()) {
            out << text;
        } else {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
            f << text;
        }
    }

private:
    std::string command_;
    json config_;
    std::chrono::steady_clock::time_point t0_;
};

GreenMode parse_mode(const std::string& m)
{
    if (m == "closed") return GreenMode::ClosedForm;
    if (m == "eigen") return GreenMode::EigenSeries;
    if (m == "appendix") return GreenMode::AppendixSeries;
    throw Error(ErrorKind::InvalidArgument, "--mode must be closed, eigen or appendix");
}

struct ModulusOpts {
    std::string matter = "pure";
    double mu = 1.0;
    int n = 1;
    std::string grid = "12x12";
    double t_max = 10.0;
    int N = 16;
    int grid_size = 0;
    int replicas = 2000;
    uint64_t seed = 1;
    int threads = 1;
    std::string cache_dir;
    bool no_cache = false;

    void add(CLI::App* c)
    {
        c->add_option("--matter", matter, "pure | ising | ffpower:<c>")->capture_default_str();
        c->add_option("--mu", mu, "cosmological constant")->capture_default_str();
        c->add_option("--n", n, "number of identity insertions")->capture_default_str();
        c->add_option("--grid", grid, "table nodes as <Re>x<Im>")->capture_default_str();
        c->add_option("--t-max", t_max, "table truncation in Im tau")->capture_default_str();
        c->add_option("--N", N, "spectral cutoff of the moment estimator")->capture_default_str();
        c->add_option("--grid-size", grid_size, "chaos grid (0 = 4N)")->capture_default_str();
        c->add_option("--replicas", replicas, "replicas per table node")->capture_default_str();
        c->add_option("--seed", seed, "seed of the moment estimator")->capture_default_str();
        c->add_option("--threads", threads, "worker threads")->capture_default_str();
        c->add_option("--cache-dir", cache_dir, "moment cache directory (default TORUS_LQG_CACHE_DIR)");
        c->add_flag("--no-cache", no_cache, "do not read or write the moment cache");
    }

    ModulusSetup setup() const
    {
        ModulusSetup s = make_modulus_setup(parse_matter(matter), mu, n);
        s.disc = {N, grid_size};
        s.mc.replicas = replicas;
        s.mc.seed = seed;
        s.mc.threads = threads;
        int gu = 0, gv = 0;
        char x = 0;
        std::stringstream ss(grid);
        if (!(ss >> gu >> x >> gv) || x != 'x' || !ss.eof())
            throw Error(ErrorKind::InvalidArgument, "--grid expects <Re nodes>x<Im nodes>, got '" + grid + "'");
        s.grid_u = gu;
        s.grid_v = gv;
        s.t_max = t_max;
        // insertions must sit on nodes of this chaos grid
        const int G = s.disc.grid_size();
        for (size_t k = 0; k < s.ins.points.size(); ++k) {
            double v = std::round(double(k) / n * G) / G;
            s.ins.points[k].z = TorusPoint(v, v);
        }
        s.ins.require_distinct();
        return s;
    }
};

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Liouville quantum field theory on tori: numerical toolkit", "torus-lqg"};
    app.set_version_flag("--version", std::string("torus-lqg ") + kToolVersion);
    app.set_config("--config", "", "config file with flat dotted keys, e.g. gmc.sample.gamma = 1.2");
    app.require_subcommand(1);

    // special-fn eval
    auto* sf = app.add_subcommand("special-fn", "eta and theta functions")->require_subcommand(1);
    auto* sf_eval = sf->add_subcommand("eval", "evaluate eta, theta_1..4 and Theta at tau");
    std::string sf_tau, sf_z = "0.3,0.1";
    sf_eval->add_option("--tau", sf_tau, "modulus re,im")->required();
    sf_eval->add_option("--z", sf_z, "theta_1 argument re,im")->capture_default_str();

    // modular reduce
    auto* mg = app.add_subcommand("modular", "modular group")->require_subcommand(1);
    auto* mg_red = mg->add_subcommand("reduce", "reduce tau to the fundamental domain");
    std::string mg_tau;
    mg_red->add_option("--tau", mg_tau, "modulus re,im")->required();

    // green
    auto* gr = app.add_subcommand("green", "torus Green function")->require_subcommand(1);
    auto* gr_eval = gr->add_subcommand("eval", "G_tau(x)");
    std::string gr_tau, gr_x, gr_mode = "closed";
    int gr_cut = 400;
    gr_eval->add_option("--tau", gr_tau, "modulus re,im")->required();
    gr_eval->add_option("--x", gr_x, "torus point x1,x2")->required();
    gr_eval->add_option("--mode", gr_mode, "closed | eigen | appendix")->capture_default_str();
    gr_eval->add_option("--cutoff", gr_cut, "eigen-series cutoff")->capture_default_str();
    auto* gr_tab = gr->add_subcommand("table", "G_tau on grid nodes");
    std::string gt_tau, gt_mode = "closed", gt_out;
    int gt_grid = 32;
    gr_tab->add_option("--tau", gt_tau, "modulus re,im")->required();
    gr_tab->add_option("--grid", gt_grid, "nodes per side")->capture_default_str();
    gr_tab->add_option("--mode", gt_mode, "closed | eigen | appendix")->capture_default_str();
    gr_tab->add_option("--out", gt_out, "CSV output")->required();

    // gff sample
    auto* gf = app.add_subcommand("gff", "Gaussian free field")->require_subcommand(1);
    auto* gf_s = gf->add_subcommand("sample", "one spectral GFF sample on a grid");
    std::string gf_tau, gf_out;
    int gf_N = 32, gf_grid = 0;
    uint64_t gf_seed = 1, gf_stream = 0;
    double gf_eps = 0.0;
    gf_s->add_option("--tau", gf_tau, "modulus re,im")->required();
    gf_s->add_option("--N", gf_N, "spectral cutoff")->capture_default_str();
    gf_s->add_option("--grid", gf_grid, "grid nodes per side (0 = 4N)")->capture_default_str();
    gf_s->add_option("--eps", gf_eps, "circle-average radius (0 = none)")->capture_default_str();
    gf_s->add_option("--seed", gf_seed, "seed")->capture_default_str();
    gf_s->add_option("--stream", gf_stream, "stream id")->capture_default_str();
    gf_s->add_option("--out", gf_out, "CSV output")->required();

    // gmc sample
    auto* gm = app.add_subcommand("gmc", "Gaussian multiplicative chaos")->require_subcommand(1);
    auto* gm_s = gm->add_subcommand("sample", "total masses of chaos replicas");
    std::string gm_tau, gm_out;
    double gm_gamma = 1.0, gm_eps = 0.0;
    int gm_N = 32, gm_grid = 0, gm_reps = 100, gm_threads = 1;
    uint64_t gm_seed = 1;
    gm_s->add_option("--gamma", gm_gamma, "coupling in (0,2]; 2 is critical")->capture_default_str();
    gm_s->add_option("--tau", gm_tau, "modulus re,im")->required();
    gm_s->add_option("--eps", gm_eps, "regularisation radius (0 = sqrt(Im tau)/(2N))")->capture_default_str();
    gm_s->add_option("--N", gm_N, "spectral cutoff")->capture_default_str();
    gm_s->add_option("--grid", gm_grid, "grid nodes per side (0 = 4N)")->capture_default_str();
    gm_s->add_option("--replicas", gm_reps, "replicas")->capture_default_str();
    gm_s->add_option("--seed", gm_seed, "seed")->capture_default_str();
    gm_s->add_option("--threads", gm_threads, "worker threads")->capture_default_str();
    gm_s->add_option("--out", gm_out, "CSV output")->required();

    // lqft
    auto* lq = app.add_subcommand("lqft", "Liouville partition functions")->require_subcommand(1);
    auto* lq_p = lq->add_subcommand("partition", "Monte Carlo partition function with insertions");
    std::string lq_tau, lq_ins, lq_out;
    double lq_gamma = 1.0, lq_mu = 1.0;
    int lq_reps = 1000, lq_N = 32, lq_grid = 0, lq_threads = 1;
    uint64_t lq_seed = 1;
    lq_p->add_option("--gamma", lq_gamma, "coupling in (0,2]")->capture_default_str();
    lq_p->add_option("--mu", lq_mu, "cosmological constant")->capture_default_str();
    lq_p->add_option("--tau", lq_tau, "modulus re,im")->required();
    lq_p->add_option("--insertions", lq_ins, "\"x1,x2,alpha;...\"")->required();
    lq_p->add_option("--replicas", lq_reps, "replicas (>= 100)")->capture_default_str();
    lq_p->add_option("--seed", lq_seed, "seed")->capture_default_str();
    lq_p->add_option("--N", lq_N, "spectral cutoff")->capture_default_str();
    lq_p->add_option("--grid", lq_grid, "grid nodes per side (0 = 4N)")->capture_default_str();
    lq_p->add_option("--threads", lq_threads, "worker threads")->capture_default_str();
    lq_p->add_option("--out", lq_out, "write the JSON here instead of stdout");
    auto* lq_kpz = lq->add_subcommand("check-kpz", "exact mu-scaling on a shared replica set");
    auto* lq_mod = lq->add_subcommand("check-modular", "modular covariance under tau -> -1/tau");
    bool lq_quick = false;
    lq_kpz->add_flag("--quick", lq_quick, "fewer replicas");
    lq_mod->add_flag("--quick", lq_quick, "fewer replicas");

    // lqg
    auto* lg = app.add_subcommand("lqg", "Liouville quantum gravity over moduli")->require_subcommand(1);
    auto* lg_d = lg->add_subcommand("modulus-density", "density table over the fundamental domain");
    ModulusOpts md;
    std::string lg_dout;
    md.add(lg_d);
    lg_d->add_option("--out", lg_dout, "CSV output")->required();
    auto* lg_j = lg->add_subcommand("sample-joint", "samples of (tau, volume, measure)");
    ModulusOpts mj;
    std::string lg_jout;
    int lg_k = 1000;
    uint64_t lg_jseed = 7;
    mj.add(lg_j);
    lg_j->add_option("--samples", lg_k, "number of joint samples")->capture_default_str();
    lg_j->add_option("--sample-seed", lg_jseed, "seed of the joint sampler")->capture_default_str();
    lg_j->add_option("--out", lg_jout, "CSV output")->required();
    auto* lg_p = lg->add_subcommand("plot", "SVG plot of a CSV file");
    std::string pl_in, pl_out, pl_kind = "heatmap";
    lg_p->add_option("data", pl_in, "CSV input")->required();
    lg_p->add_option("--out", pl_out, "SVG output")->required();
    lg_p->add_option("--kind", pl_kind, "heatmap | line")->capture_default_str();

    // check
    auto* ck = app.add_subcommand("check", "acceptance suite")->require_subcommand(1);
    auto* ck_all = ck->add_subcommand("all", "run every acceptance check");
    auto* ck_one = ck->add_subcommand("only", "run the listed checks");
    bool ck_quick = false;
    int ck_threads = 1;
    std::vector<int> ck_ids;
    std::string ck_json;
    for (auto* c : {ck_all, ck_one}) {
        c->add_flag("--quick", ck_quick, "reduced replica counts, same thresholds");
        c->add_option("--threads", ck_threads, "worker threads")->capture_default_str();
        c->add_option("--json", ck_json, "also write the results as JSON");
    }
    ck_one->add_option("--id", ck_ids, "check number 1-15")->required()->check(CLI::Range(1, kCheckCount));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "torus-lqg " << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const CLI::App* deepest = &app;
        for (bool moved = true; moved;) {
            moved = false;
            for (const CLI::App* s : deepest->get_subcommands())
                if (s->parsed()) {
                    deepest = s;
                    moved = true;
                    break;
                }
        }
        err << deepest->help();
        return kValidation;
    }

    auto cmd_name = [](const CLI::App* a) {
        std::string n = a->get_name();
        for (const CLI::App* p = a->get_parent(); p && p->get_parent(); p = p->get_parent()) n = p->get_name() + " " + n;
        return n;
    };

    if (sf_eval->parsed()) {
        Run run(cmd_name(sf_eval), collect_config(sf_eval));
        ComplexUH tau = parse_tau(sf_tau);
        auto z = parse_pair(sf_z, "--z");
        json r;
        r["eta"] = jc(dedekind_eta(tau));
        r["eta_product"] = jc(dedekind_eta_product(tau));
        r["theta1"] = jc(theta1({z[0], z[1]}, tau));
        r["theta1_prime0"] = jc(theta1_z_derivative_at_zero(tau));
        for (int k = 2; k <= 4; ++k) r["theta" + std::to_string(k)] = jc(theta_aux(k, tau));
        r["Theta"] = theta_const(tau);
        run.emit_json(r, out);
        return kOk;
    }
    if (mg_red->parsed()) {
        Run run(cmd_name(mg_red), collect_config(mg_red));
        auto red = reduce_to_fundamental(parse_tau(mg_tau));
        json r;
        r["tau"] = {red.tau.re, red.tau.im};
        r["witness"] = {red.witness.a, red.witness.b, red.witness.c, red.witness.d};
        r["in_fundamental_domain"] = in_fundamental_domain(red.tau);
        run.emit_json(r, out);
        return kOk;
    }
    if (gr_eval->parsed()) {
        Run run(cmd_name(gr_eval), collect_config(gr_eval));
        ComplexUH tau = parse_tau(gr_tau);
        auto x = parse_pair(gr_x, "--x");
        GreenEvalConfig cfg;
        cfg.mode = parse_mode(gr_mode);
        cfg.eigen_cutoff = gr_cut;
        json r;
        r["green"] = green(tau, TorusPoint(x[0], x[1]), cfg);
        if (cfg.mode == GreenMode::EigenSeries)
            r["error_estimate"] = green_eigen_error_estimate(tau, TorusPoint(x[0], x[1]), gr_cut);
        run.emit_json(r, out);
        return kOk;
    }
    if (gr_tab->parsed()) {
        Run run(cmd_name(gr_tab), collect_config(gr_tab));
        ComplexUH tau = parse_tau(gt_tau);
        if (gt_grid < 2) throw Error(ErrorKind::InvalidArgument, "--grid must be >= 2");
        GreenEvalConfig cfg;
        cfg.mode = parse_mode(gt_mode);
        std::string body;
        for (int j = 0; j < gt_grid; ++j)
            for (int k = 0; k < gt_grid; ++k) {
                if (j == 0 && k == 0) continue;  // the singular node
                double x1 = double(j) / gt_grid, x2 = double(k) / gt_grid;
                if (cfg.mode == GreenMode::AppendixSeries && k == 0) continue;
                body += num(x1) + "," + num(x2) + "," + num(green(tau, TorusPoint(x1, x2), cfg)) + "\n";
            }
        run.write_csv(gt_out, "x1,x2,green", body);
        return kOk;
    }
    if (gf_s->parsed()) {
        Run run(cmd_name(gf_s), collect_config(gf_s));
        ComplexUH tau = parse_tau(gf_tau);
        GffGridSampler s(tau, gf_N, gf_grid, gf_eps);
        RngStream rng(gf_seed, gf_stream);
        RealGrid g;
        s.sample(rng, g);
        std::string body;
        for (int j = 0; j < g.size; ++j)
            for (int k = 0; k < g.size; ++k)
                body += num(double(j) / g.size) + "," + num(double(k) / g.size) + "," + num(g(j, k)) + "\n";
        run.write_csv(gf_out, "x1,x2,value", body, {"point_variance: " + num(s.point_variance())});
        return kOk;
    }
    if (gm_s->parsed()) {
        Run run(cmd_name(gm_s), collect_config(gm_s));
        ComplexUH tau = parse_tau(gm_tau);
        if (gm_reps < 1) throw Error(ErrorKind::InvalidArgument, "--replicas must be >= 1");
        std::vector<double> tot(gm_reps), mcf(gm_reps);
        const int workers = std::max(1, gm_threads);
        {
            ChaosSampler probe(tau, gm_N, gm_gamma, gm_grid, gm_eps);  // validates before spawning
        }
        parallel_for(workers, workers, [&](int w) {
            ChaosSampler s(tau, gm_N, gm_gamma, gm_grid, gm_eps);
            for (int r = int(int64_t(gm_reps) * w / workers); r < int(int64_t(gm_reps) * (w + 1) / workers); ++r) {
                RngStream rng(gm_seed, uint64_t(r));
                auto m = s.sample(rng);
                tot[r] = m.total_mass();
                mcf[r] = m.max_cell_fraction();
            }
        });
        std::string body;
        for (int r = 0; r < gm_reps; ++r) body += std::to_string(r) + "," + num(tot[r]) + "," + num(mcf[r]) + "\n";
        run.write_csv(gm_out, "replica_id,total_mass,max_cell_fraction", body);
        return kOk;
    }
    if (lq_p->parsed()) {
        Run run(cmd_name(lq_p), collect_config(lq_p));
        LQFTParams p(lq_gamma, lq_mu);
        MonteCarloConfig mc;
        mc.replicas = lq_reps;
        mc.seed = lq_seed;
        mc.threads = lq_threads;
        auto e = partition_function(p, parse_tau(lq_tau), parse_insertions(lq_ins), mc, {lq_N, lq_grid});
        json r;
        r["value"] = e.value;
        r["std_error"] = e.std_error;
        r["replicas"] = e.replicas;
        r["moment"] = e.moment;
        r["moment_se"] = e.moment_se;
        if (!e.diagnostic.empty()) r["diagnostic"] = e.diagnostic;
        run.emit_json(r, out, lq_out);
        return kOk;
    }
    if (lq_kpz->parsed() || lq_mod->parsed()) {
        const CLI::App* c = lq_kpz->parsed() ? lq_kpz : lq_mod;
        Run run(cmd_name(c), collect_config(c));
        CheckOptions o;
        o.quick = lq_quick;
        CheckResult res = run_check(lq_kpz->parsed() ? 9 : 10, o);
        json r;
        r["pass"] = res.pass;
        r["summary"] = res.summary;
        r["stats"] = res.stats;
        run.emit_json(r, out);
        return res.pass ? kOk : kAcceptance;
    }
    if (lg_d->parsed()) {
        Run run(cmd_name(lg_d), collect_config(lg_d));
        ModulusSetup s = md.setup();
        std::unique_ptr<MomentCache> cache;
        if (!md.no_cache) cache = std::make_unique<MomentCache>(md.cache_dir);
        DensityTable T = DensityTable::build(s, cache.get());
        std::string body;
        for (int i = 0; i < T.nu(); ++i)
            for (int k = 0; k < T.nv(); ++k) {
                ComplexUH t = T.tau(i, k);
                body += num(t.re) + "," + num(t.im) + "," + num(T.at(i, k).value) + "," + num(T.at(i, k).se) + "\n";
            }
        run.write_csv(lg_dout, "re_tau,im_tau,density,se", body,
                      {"tail_mass_beyond_t_max: " + num(T.tail_mass())});
        return kOk;
    }
    if (lg_j->parsed()) {
        Run run(cmd_name(lg_j), collect_config(lg_j));
        ModulusSetup s = mj.setup();
        std::unique_ptr<MomentCache> cache;
        if (!mj.no_cache) cache = std::make_unique<MomentCache>(mj.cache_dir);
        DensityTable T = DensityTable::build(s, cache.get());
        if (lg_k < 1) throw Error(ErrorKind::InvalidArgument, "--samples must be >= 1");
        auto js = joint_law_sampler(s, T, lg_k, lg_jseed);
        std::string body;
        for (size_t r = 0; r < js.size(); ++r)
            body += std::to_string(r) + "," + num(js[r].tau.re) + "," + num(js[r].tau.im) + "," + num(js[r].volume) +
                    "," + num(js[r].weight) + "," + num(js[r].measure_mass) + "\n";
        run.write_csv(lg_jout, "sample_id,re_tau,im_tau,volume,weight,measure_mass", body,
                      {"tail_mass_beyond_t_max: " + num(T.tail_mass())});
        return kOk;
    }
    if (lg_p->parsed()) {
        PlotKind k;
        if (pl_kind == "heatmap")
            k = PlotKind::Heatmap;
        else if (pl_kind == "line")
            k = PlotKind::Line;
        else
            throw Error(ErrorKind::InvalidArgument, "--kind must be heatmap or line");
        emit_plot(pl_in, k, pl_out);
        return kOk;
    }
    if (ck_all->parsed() || ck_one->parsed()) {
        CheckOptions o;
        o.quick = ck_quick;
        o.threads = ck_threads;
        o.log = &err;
        std::vector<int> ids = ck_ids;
        if (ck_all->parsed()) {
            ids.clear();
            for (int i = 1; i <= kCheckCount; ++i) ids.push_back(i);
        }
        bool ok = true;
        json all = json::array();
        for (int id : ids) {
            CheckResult r = run_check(id, o);
            out << format_line(r) << "\n" << std::flush;
            ok = ok && r.pass;
            all.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds},
                           {"summary", r.summary}, {"stats", r.stats}});
        }
        if (!ck_json.empty()) {
            std::ofstream f(ck_json, std::ios::trunc);
            f << all.dump(2) << "\n";
        }
        return ok ? kOk : kAcceptance;
    }
    return kValidation;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        return dispatch(args, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_numeric_failure(e.kind()) ? kNumeric : kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

int run_subcommand(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_subcommand(args, std::cout, std::cerr);
}

namespace {

std::string strip_clock(const std::string& s)
{
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line))
        if (line.find("wall_clock_seconds") == std::string::npos) out += line + "\n";
    return out;
}

}  // namespace

bool same_output_text(const std::string& a, const std::string& b) { return strip_clock(a) == strip_clock(b); }

bool same_output(const std::string& path_a, const std::string& path_b)
{
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        if (!f) throw Error(ErrorKind::Io, "cannot read " + p);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    };
    return same_output_text(slurp(path_a), slurp(path_b));
}

}  // namespace torus_lqg::cli
