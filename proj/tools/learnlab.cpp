// learnlab: run an experiment suite from a JSON config, or render the
// markdown report for an existing artifact directory.
//
//   learnlab run --config suite.json [--out DIR] [--seed-override N]
//   learnlab report --in DIR [--out FILE]
//
// Exit codes: 0 success, 1 experiment failure, 2 config or usage error.

#include "learnlab/report.hpp"
#include "learnlab/suite.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kExperimentFailure = 1;
constexpr int kConfigError = 2;

int cmd_run(const std::string& config, const std::string& out_flag, const std::optional<std::uint64_t>& seed) {
    try {
        auto cfg = learnlab::load_suite(config);
        if (seed) cfg = learnlab::with_seed(cfg, *seed);
        std::string out = out_flag;
        if (out.empty()) {
            if (!cfg.output) throw learnlab::ConfigError("output", "no output directory: set \"output\" or pass --out");
            out = *cfg.output;
        }
        const auto manifest = learnlab::run_suite(cfg, out);
        fmt::print("wrote {} block(s) to {} (config hash {})\n", manifest.at("blocks").size(), out,
                   manifest.at("config_hash").get<std::string>());
        return kOk;
    } catch (const learnlab::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    } catch (const learnlab::BlockFailure& e) {
        fmt::print(stderr, "{}\n", e.what());
        return kExperimentFailure;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExperimentFailure;
    }
}

int cmd_report(const std::string& in, const std::string& out_flag) {
    try {
        const auto text = learnlab::emit_report(in);
        const std::string out = out_flag.empty() ? (std::filesystem::path(in) / "report.md").string() : out_flag;
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error(fmt::format("cannot write {}", out));
        f << text;
        fmt::print("wrote {}\n", out);
        return kOk;
    } catch (const learnlab::MissingManifest& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExperimentFailure;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"learnlab: learnability experiments"};
    app.require_subcommand(1);

    std::string config, run_out;
    std::optional<std::uint64_t> seed_override;
    auto* run = app.add_subcommand("run", "execute every block of a suite config");
    run->add_option("--config", config, "suite config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "output directory (overrides the config's \"output\")");
    run->add_option("--seed-override", seed_override, "replace the config seed");

    std::string in, report_out;
    auto* report = app.add_subcommand("report", "render report.md from an artifact directory");
    report->add_option("--in", in, "artifact directory containing manifest.json")->required();
    report->add_option("--out", report_out, "report path (default: <in>/report.md)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*run) return cmd_run(config, run_out, seed_override);
    return cmd_report(in, report_out);
}
