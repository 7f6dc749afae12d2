// Command-line front end: galring <subcommand> [--config FILE] [--out FILE]
// [--format csv|json] [--budget N] [--seed N].
//
// Exit codes: 0 success, 1 a check failed, 2 usage, parse or input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <galring/harness.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::optional<galring::u64> budget;
    std::optional<galring::u64> seed;
    std::string ring;
};

int emit(const galring::JobOutput& result, const Options& opt) {
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (opt.out.empty()) {
        std::cout << result.text;
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write '" << opt.out << "'\n";
            return kExitUsage;
        }
        f << result.text;
    }
    return result.ok ? kExitOk : kExitCheckFailed;
}

galring::JobConfig job_for(const std::string& task, const Options& opt) {
    galring::JobConfig cfg;
    if (!opt.config.empty()) {
        cfg = galring::load_job(opt.config);
        if (cfg.task != task)
            galring::fail(galring::ErrorCode::ParseError, "config task '" + cfg.task + "' does not match subcommand '" + task + "'");
    } else {
        cfg.task = task;
    }
    if (opt.budget) cfg.budget = *opt.budget;
    if (opt.seed) cfg.seed = *opt.seed;
    if (task == "census" && !cfg.seed) galring::fail(galring::ErrorCode::ParseError, "census needs a seed");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galois ring character sums, configuration counts and threshold checks"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config, "JSON job file");
    app.add_option("--out", opt.out, "write output here instead of stdout");
    app.add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--budget", opt.budget, "work budget (dot products or tuples)");
    app.add_option("--seed", opt.seed, "64-bit seed");

    auto* ring_info = app.add_subcommand("ring-info", "describe a ring");
    ring_info->add_option("--ring", opt.ring, "descriptor such as 'p=2 e=3 k=2 f=1,1,1'");
    auto* selftest = app.add_subcommand("selftest", "run every self-test suite on a ring list");
    auto* count = app.add_subcommand("count", "exact configuration counts");
    auto* bounds = app.add_subcommand("bounds", "threshold table over a parameter grid");
    auto* census = app.add_subcommand("census", "seeded random subsets and their largest dot-product class");
    auto* verify = app.add_subcommand("verify-identities", "exact character-sum identities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        auto fmt = [&](galring::OutputFormat fallback) {
            return opt.format.empty() ? fallback : galring::parse_format(opt.format);
        };
        using galring::OutputFormat;
        if (ring_info->parsed()) {
            std::string desc = opt.ring;
            if (desc.empty() && !opt.config.empty()) {
                const auto cfg = galring::load_job(opt.config);
                if (cfg.ring) desc = *cfg.ring;
            }
            if (desc.empty()) galring::fail(galring::ErrorCode::ParseError, "ring-info needs --ring");
            return emit(galring::run_ring_info(galring::GaloisRing::parse(desc), fmt(OutputFormat::Json)), opt);
        }
        if (selftest->parsed()) return emit(galring::run_selftest(job_for("selftest", opt), fmt(OutputFormat::Csv)), opt);
        if (count->parsed()) return emit(galring::run_count(job_for("count", opt), fmt(OutputFormat::Json)), opt);
        if (bounds->parsed()) return emit(galring::run_bounds(job_for("bounds", opt), fmt(OutputFormat::Csv)), opt);
        if (census->parsed()) return emit(galring::run_census(job_for("census", opt), fmt(OutputFormat::Csv)), opt);
        if (verify->parsed())
            return emit(galring::run_verify_identities(job_for("verify-identities", opt), fmt(OutputFormat::Csv)), opt);
    } catch (const galring::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
