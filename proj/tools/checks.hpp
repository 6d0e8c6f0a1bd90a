#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace torus_lqg::cli {

struct CheckOptions {
    bool quick = false;     // fewer replicas, same thresholds
    int threads = 1;
    std::string cache_dir;  // "" -> TORUS_LQG_CACHE_DIR or the default
    std::ostream* log = nullptr;
};

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double time_limit = 0.0;
    std::string summary;
    nlohmann::json stats;
};

inline constexpr int kCheckCount = 15;

std::string check_title(int id);
CheckResult run_check(int id, const CheckOptions& opt);
// "PASS  #7  GMC modular pushforward  (3.1 s)  KS p = 0.41"
std::string format_line(const CheckResult& r);

}  // namespace torus_lqg::cli
