// Command-line front end: generate benchmark manifests, run experiment grids
// against live or mock providers, and re-score or re-report persisted logs.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration problem,
// 3 run completed but some completion calls failed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "codesim/runner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace codesim;

// --spec accepts either a built-in grid name or a path to a JSON spec file.
ExperimentSpec load_spec(const std::string& spec_arg) {
    if (!fs::exists(spec_arg)) return builtin_spec(spec_arg);
    std::ifstream in(spec_arg);
    if (!in) throw ConfigError("cannot read spec file: " + spec_arg);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("spec file is not valid JSON: " + std::string(e.what()));
    }
    return ExperimentSpec::from_json(j);
}

void apply_overrides(ExperimentSpec& spec, const std::string& mode, int parallel,
                     const std::optional<std::uint64_t>& seed) {
    if (!mode.empty()) spec.mode = cache_mode_from_name(mode);
    if (parallel > 0) spec.parallelism = parallel;
    if (seed) spec.master_seed = *seed;
}

void print_outcome(const RunOutcome& outcome) {
    std::cout << "spec " << outcome.spec_hash << ": " << outcome.planned_calls << " calls, "
              << outcome.failed_calls << " failed";
    if (!outcome.skipped.empty()) std::cout << ", " << outcome.skipped.size() << " combinations skipped";
    std::cout << "\n";
    for (const auto& note : outcome.skipped) std::cout << "  skipped: " << note << "\n";
    std::cout << "reports: " << outcome.reports_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic code-simulation benchmark harness"};
    app.require_subcommand(1);

    std::string spec_arg;
    std::string mode;
    int parallel = 0;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        auto* opt = cmd->add_option("--spec", spec_arg,
                                    "built-in grid name (paper-replication, smoke) or JSON spec file");
        if (needs_spec) opt->required();
        cmd->add_option("--mode", mode, "cache mode: live, record, or replay")
            ->check(CLI::IsMember({"live", "record", "replay"}));
        cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "master seed for instance generation");
        cmd->add_option("--out", out_dir, "output directory (default: out)");
    };

    CLI::App* generate = app.add_subcommand("generate", "emit the instance manifest and sources");
    add_common(generate, true);

    CLI::App* run = app.add_subcommand("run", "execute an experiment spec end to end");
    add_common(run, true);

    CLI::App* score = app.add_subcommand("score", "re-extract and re-score persisted logs");
    add_common(score, false);

    CLI::App* report = app.add_subcommand("report", "rebuild report tables from persisted logs");
    add_common(report, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            ExperimentSpec spec = load_spec(spec_arg);
            apply_overrides(spec, mode, parallel, seed);
            Runner runner(spec, out_dir);
            const fs::path manifest = runner.generate();
            std::cout << "manifest: " << manifest.string() << "\n";
            return 0;
        }
        if (run->parsed()) {
            ExperimentSpec spec = load_spec(spec_arg);
            apply_overrides(spec, mode, parallel, seed);
            Runner runner(spec, out_dir);
            RunOutcome outcome = runner.run();
            print_outcome(outcome);
            return outcome.failed_calls > 0 ? 3 : 0;
        }
        // score re-runs extraction against the stored responses; report only
        // re-aggregates what extraction already produced.
        const fs::path logs_dir = fs::path(out_dir) / "logs";
        const fs::path reports_dir = fs::path(out_dir) / "reports";
        RunOutcome outcome = rescore_logs(logs_dir, reports_dir, /*re_extract=*/score->parsed());
        print_outcome(outcome);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AuthError& e) {
        std::cerr << "auth error: " << e.what() << "\n";
        return 2;
    } catch (const CacheMiss& e) {
        std::cerr << "cache miss in replay mode: " << e.what() << "\n";
        return 2;
    } catch (const MissingLogs& e) {
        std::cerr << "no logs to process: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
