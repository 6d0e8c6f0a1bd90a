// Runs the 15 acceptance checks and prints one PASS/FAIL line each.
// Exit status: 0 if every FAIL is listed in the known-failures file, 3 otherwise.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "cli.hpp"

using namespace torus_lqg::cli;

int main(int argc, char** argv)
{
    CLI::App app{"acceptance suite"};
    bool quick = false;
    int threads = 1;
    std::string known_path, json_path;
    std::vector<int> only;
    app.add_flag("--quick", quick, "reduced replica counts");
    app.add_option("--threads", threads);
    app.add_option("--known-failures", known_path, "file of '<id> <reason>' lines");
    app.add_option("--json", json_path, "write all statistics here");
    app.add_option("--only", only, "run just these ids")->check(CLI::Range(1, kCheckCount));
    CLI11_PARSE(app, argc, argv);

    std::map<int, std::string> known;
    if (!known_path.empty()) {
        std::ifstream f(known_path);
        if (!f) {
            std::cerr << "cannot read " << known_path << "\n";
            return 1;
        }
        for (std::string line; std::getline(f, line);) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream in(line);
            int id = 0;
            std::string reason;
            if (in >> id) {
                std::getline(in >> std::ws, reason);
                known[id] = reason;
            }
        }
    }
    if (only.empty())
        for (int i = 1; i <= kCheckCount; ++i) only.push_back(i);

    CheckOptions opt;
    opt.quick = quick;
    opt.threads = threads;
    opt.log = &std::cerr;
    int pass = 0, expected_fail = 0, unexpected = 0;
    nlohmann::json all = nlohmann::json::array();
    for (int id : only) {
        CheckResult r = run_check(id, opt);
        std::cout << format_line(r) << std::endl;
        all.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds},
                       {"summary", r.summary}, {"stats", r.stats}});
        if (r.pass) {
            ++pass;
            if (known.count(id)) std::cout << "      (#" << id << " is listed as a known failure but passed)\n";
        } else if (known.count(id)) {
            ++expected_fail;
            std::cout << "      known failure: " << known[id] << "\n";
        } else {
            ++unexpected;
        }
    }
    if (!json_path.empty()) std::ofstream(json_path) << all.dump(2) << "\n";
    std::cout << pass << " passed, " << expected_fail << " known failures, " << unexpected << " unexpected failures\n";
    return unexpected == 0 ? 0 : kAcceptance;
}
