#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "plot.hpp"
#include "torus_lqg/torus_green.hpp"

using namespace torus_lqg;
using namespace torus_lqg::cli;
namespace fs = std::filesystem;

namespace {

struct Res {
    int code;
    std::string out, err;
};

Res run(const std::vector<std::string>& a)
{
    std::ostringstream o, e;
    int c = run_subcommand(a, o, e);
    return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("torus_lqg_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("green eval round trip")
{
    Res r = run({"green", "eval", "--tau", "0,1", "--x", "0.3,0.4"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["green"].get<double>() == green(ComplexUH(0, 1), TorusPoint(0.3, 0.4)));
    CHECK(j["config"]["tau"] == "0,1");
    CHECK(j.contains("wall_clock_seconds"));
}

TEST_CASE("usage errors exit 1 and name the flag")
{
    Res r = run({"green", "eval", "--tau", "0,1", "--x", "0.3,0.4", "--bogus", "3"});
    CHECK(r.code == kValidation);
    CHECK(r.err.find("--bogus") != std::string::npos);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == kValidation);
    CHECK(run({"green", "eval", "--tau", "0,-1", "--x", "0.3,0.4"}).code == kValidation);
    auto d = scratch("gamma");
    CHECK(run({"gmc", "sample", "--gamma", "2.5", "--tau", "0,1", "--out", (d / "m.csv").string()}).code ==
          kValidation);
    CHECK(run({"--help"}).code == kOk);
}

TEST_CASE("numeric failures exit 2")
{
    auto d = scratch("tail");
    // a table cut at Im tau = 4 leaves too much mass above it
    Res r = run({"lqg", "sample-joint", "--grid", "3x3", "--N", "8", "--replicas", "100", "--t-max", "4",
                 "--no-cache", "--samples", "5", "--out", (d / "j.csv").string()});
    CHECK(r.code == kNumeric);
    CHECK(r.err.find("TruncationTooTight") != std::string::npos);
}

TEST_CASE("CSV header carries version, config, seed and wall clock")
{
    auto d = scratch("header");
    fs::path f = d / "m.csv";
    REQUIRE(run({"gmc", "sample", "--gamma", "0.8", "--tau", "0.1,1.2", "--N", "8", "--replicas", "5", "--seed",
                 "77", "--out", f.string()})
                .code == 0);
    std::string s = slurp(f);
    CHECK(s.rfind("# torus-lqg 0.3.0 gmc sample\n", 0) == 0);
    CHECK(s.find("\"seed\":77") != std::string::npos);
    CHECK(s.find("# wall_clock_seconds: ") != std::string::npos);
    CHECK(s.find("replica_id,total_mass,max_cell_fraction\n") != std::string::npos);
    auto t = read_csv(f.string());
    CHECK(t.rows.size() == 5);
}

TEST_CASE("config file with dotted keys, flags override")
{
    auto d = scratch("config");
    fs::path cfg = d / "run.ini", out = d / "m.csv";
    std::ofstream(cfg) << "gmc.sample.gamma = 1.3\ngmc.sample.replicas = 3\ngmc.sample.tau = \"0,1\"\n";
    REQUIRE(run({"--config", cfg.string(), "gmc", "sample", "--N", "8", "--replicas", "4", "--out", out.string()})
                .code == 0);
    std::string s = slurp(out);
    CHECK(s.find("\"gamma\":1.3") != std::string::npos);
    CHECK(read_csv(out.string()).rows.size() == 4);
}

TEST_CASE("re-runs are identical apart from the clock")
{
    auto d = scratch("repeat");
    // same path both times: the output path is part of the recorded config
    for (int k = 0; k < 2; ++k) {
        REQUIRE(run({"gff", "sample", "--tau", "0.2,1.1", "--N", "8", "--seed", "3", "--out", (d / "f.csv").string()})
                    .code == 0);
        fs::copy_file(d / "f.csv", d / ("f" + std::to_string(k) + ".csv"));
    }
    CHECK(same_output((d / "f0.csv").string(), (d / "f1.csv").string()));
    CHECK(same_output_text("a\n# wall_clock_seconds: 1\n", "a\n# wall_clock_seconds: 2\n"));
    CHECK_FALSE(same_output_text("a\n", "b\n"));
}

TEST_CASE("plot: deterministic SVG, one path per cell, no file on bad input")
{
    auto d = scratch("plot");
    fs::path csv = d / "density.csv";
    {
        std::ofstream f(csv);
        f << "# header\nre_tau,im_tau,density,se\n";
        for (double u : {-0.5, 0.0, 0.5})
            for (double y : {1.0, 2.0, 4.0}) f << u << "," << y << "," << u * u + 1.0 / y << ",0.01\n";
    }
    REQUIRE(run({"lqg", "plot", csv.string(), "--out", (d / "a.svg").string()}).code == 0);
    REQUIRE(run({"lqg", "plot", csv.string(), "--out", (d / "b.svg").string()}).code == 0);
    std::string a = slurp(d / "a.svg");
    CHECK(a == slurp(d / "b.svg"));
    size_t cells = 0;
    for (size_t p = a.find("class=\"cell\""); p != std::string::npos; p = a.find("class=\"cell\"", p + 1)) ++cells;
    CHECK(cells == 4);
    std::ofstream(d / "empty.csv") << "";
    CHECK(run({"lqg", "plot", (d / "empty.csv").string(), "--out", (d / "e.svg").string()}).code == kValidation);
    CHECK_FALSE(fs::exists(d / "e.svg"));
    std::ofstream(d / "wrong.csv") << "a,b\n1,2\n";
    CHECK(run({"lqg", "plot", (d / "wrong.csv").string(), "--out", (d / "w.svg").string()}).code == kValidation);
    CHECK_FALSE(fs::exists(d / "w.svg"));
}

TEST_CASE("check exit codes")
{
    CHECK(run({"check", "only", "--id", "1", "--quick"}).code == kOk);
    Res r = run({"check", "only", "--id", "8", "--quick"});
    CHECK(r.code == kAcceptance);
    CHECK(r.out.find("FAIL  #8") == 0);
    CHECK(run({"check", "only", "--id", "16"}).code == kValidation);
}
