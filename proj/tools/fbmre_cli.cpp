// Command-line front end. All real work happens behind the C API in
// libfbmre; this binary only parses flags, merges them into the run
// config document, and forwards exit codes.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbmre.h"

namespace {

int run(const std::string& command, const std::string& config_path, std::uint64_t seed,
        bool seed_set, int workers, const std::string& out_dir, const std::string& checks) {
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) {
            std::fprintf(stderr, "error: cannot open config %s\n", config_path.c_str());
            return 1;
        }
        try {
            f >> doc;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }
    // Flags override document fields.
    if (seed_set) doc["seed"] = seed;
    if (workers > 0) doc["workers"] = workers;
    if (!checks.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        std::stringstream ss(checks);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) arr.push_back(item);
        }
        doc["checks"] = arr;
    }

    std::string resolved_out = out_dir;
    if (resolved_out.empty()) {
        if (doc.contains("out_dir")) {
            resolved_out = doc.at("out_dir").get<std::string>();
        } else if (const char* env = std::getenv("FBMRE_OUT_DIR")) {
            resolved_out = env;
        } else {
            resolved_out = ".";
        }
    }

    int exit_code = 0;
    const fbmre_status st =
        fbmre_run_command(command.c_str(), doc.dump().c_str(), resolved_out.c_str(), &exit_code);
    if (st != FBMRE_OK) {
        std::fprintf(stderr, "error: %s\n", fbmre_last_error());
    }
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact FBM simulation and persistence-probability toolkit"};
    app.set_version_flag("--version", fbmre_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string checks;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run-config JSON document");
        cmd->add_option("--seed", seed, "Master seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
        cmd->add_option("--out", out_dir, "Output directory (default: config, then $FBMRE_OUT_DIR)");
    };

    CLI::App* persist = app.add_subcommand(
        "persist", "Persistence probabilities over a T-grid, with exponent fit");
    add_common(persist);
    CLI::App* small = app.add_subcommand(
        "small-barrier", "Small-barrier probabilities over an epsilon-grid, with exponent fit");
    add_common(small);
    CLI::App* verify = app.add_subcommand("verify", "Run the quantitative verification suite");
    add_common(verify);
    verify->add_option("--checks", checks, "Comma-separated check-name filter");
    CLI::App* bench = app.add_subcommand("bench", "Sampler throughput comparison");
    add_common(bench);
    CLI::App* simulate = app.add_subcommand("simulate", "Dump raw sampled paths");
    add_common(simulate);

    CLI11_PARSE(app, argc, argv);

    for (const auto* cmd : {persist, small, verify, bench, simulate}) {
        if (cmd->parsed()) {
            return run(cmd->get_name(), config_path, seed, seed_set, workers, out_dir, checks);
        }
    }
    return 1;
}
