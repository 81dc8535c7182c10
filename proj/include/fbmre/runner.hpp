#pragma once
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fbmre/checks.hpp"
#include "fbmre/fit.hpp"
#include "fbmre/hurst_law.hpp"
#include "fbmre/mc.hpp"

namespace fbmre {

// Exit codes shared by the library runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;

// Parsed run configuration. The JSON document is the source of truth;
// CLI flags override individual fields before parsing.
struct RunConfig {
    std::uint64_t master_seed = 0;
    int workers = 0;
    std::filesystem::path out_dir = ".";
    std::string version_stamp;
    std::string raw_json; // canonical echo for the manifest
};

HurstLaw parse_law_json(const std::string& json_text);
std::string law_to_string(const HurstLaw& law);

struct CurveRow {
    std::string quantity;
    std::string law;
    double x = 0.0; // T or epsilon
    std::int64_t m = 0;
    McEstimate estimate;
    std::uint64_t seed = 0;
};

// CSV with the fixed column set
// quantity,H_or_law,T_or_eps,m,n_paths,n_hits,p_hat,std_err,ci_lo,ci_hi,seed.
void write_estimates_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

struct CommandResult {
    int exit_code = kExitOk;
    std::string message;
    std::vector<std::filesystem::path> outputs;
};

// command is one of persist, small-barrier, verify, bench, simulate.
// config_json is the run document; out_dir receives the CSV/JSON artifacts
// plus a manifest attesting to their digests.
CommandResult run_command(const std::string& command, const std::string& config_json,
                          const std::filesystem::path& out_dir);

std::vector<std::string> verify_check_names();

} // namespace fbmre
