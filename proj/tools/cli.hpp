#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torus_lqg::cli {

inline constexpr const char* kToolVersion = "0.3.0";

enum ExitCode { kOk = 0, kValidation = 1, kNumeric = 2, kAcceptance = 3 };

// args excludes the program name
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_subcommand(int argc, char** argv);

// true if the two files have the same bytes once lines carrying the
// wall-clock duration are dropped
bool same_output(const std::string& path_a, const std::string& path_b);
bool same_output_text(const std::string& a, const std::string& b);

}  // namespace torus_lqg::cli
