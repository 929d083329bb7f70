#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ibn {

/// Settings shared by every command. A run-config file (JSON with the same
/// keys) fills anything not given as a flag.
struct RunConfig {
    std::filesystem::path state;
    std::filesystem::path prompts;
    std::filesystem::path scenarios;
    std::string backend;
    double l_max = 100.0;
    double kappa_max = 85.0;
    int repeats = 3;
    int jobs = 1;
    std::optional<std::filesystem::path> out;
    std::string system = "multi_agent";
};

/// $IBN_DATA_DIR, else the source tree the binary was built from.
std::filesystem::path default_data_dir();

RunConfig default_run_config();

/// Entry point behind the ibnorch binary. args excludes the program name.
/// Returns 0 on success, 1 on a harness error, 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ibn
