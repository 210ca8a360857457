// sqfcs — batch CLI for counting statistics of a periodically driven bosonic
// junction with squeezed thermal reservoirs

#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sqfcs/sweep.hpp"
#include "sqfcs/verify.hpp"
#include "sqfcs/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCrosscheck = 3;

void apply_overrides(sqfcs::sweep::SweepConfig& cfg, const std::string& out_dir,
                     bool out_set, int threads, bool threads_set, std::uint64_t seed,
                     bool seed_set) {
    if (out_set) cfg.out_dir = out_dir;
    if (threads_set) cfg.threads = threads;
    if (seed_set) cfg.seed = seed;
}

int run_jobs(std::vector<sqfcs::sweep::SweepConfig> jobs) {
    int exit_code = kExitOk;
    for (const auto& cfg : jobs) {
        const auto res = sqfcs::sweep::run(cfg);
        for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
        for (const auto& fail : res.crosscheck_failures)
            std::fprintf(stderr, "cross-check failure: %s\n", fail.c_str());
        exit_code = std::max(exit_code, res.exit_code);
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sqfcs - full counting statistics of boson exchange through a driven "
        "two-level junction coupled to squeezed thermal reservoirs"};
    app.set_version_flag("--version", sqfcs::kVersion);
    app.require_subcommand(1);
    app.fallthrough(true);  // global options may follow the subcommand

    std::string out_dir = ".";
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed = 0;
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads");
    auto* seed_opt = app.add_option("--seed", seed, "random seed for stochastic sampling");

    std::string config_path;
    auto* point_cmd = app.add_subcommand("point", "evaluate a single parameter point");
    point_cmd->add_option("--config", config_path, "configuration file")->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("--config", config_path, "configuration file")->required();

    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "run a frozen figure preset");
    preset_cmd->add_option("name", preset_name, "fig1cd, fig2, fig3 or fig4")->required();

    bool fast = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the full cross-check suite");
    verify_cmd->add_flag("--fast", fast, "smaller Monte Carlo budgets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (point_cmd->parsed() || sweep_cmd->parsed()) {
            auto cfg = sqfcs::sweep::load_config(config_path);
            if (point_cmd->parsed() && !cfg.axes.empty())
                throw sqfcs::ConfigError("'point' requires a config without sweep axes");
            apply_overrides(cfg, out_dir, out_opt->count() > 0, threads,
                            threads_opt->count() > 0, seed, seed_opt->count() > 0);
            return run_jobs({cfg});
        }
        if (preset_cmd->parsed()) {
            auto jobs = sqfcs::sweep::preset(preset_name);
            for (auto& cfg : jobs)
                apply_overrides(cfg, out_dir, out_opt->count() > 0, threads,
                                threads_opt->count() > 0, seed, seed_opt->count() > 0);
            return run_jobs(jobs);
        }
        if (verify_cmd->parsed()) {
            sqfcs::verify::Options opts;
            opts.fast = fast;
            opts.threads = threads;
            bool all_pass = true;
            for (const auto& r : sqfcs::verify::run_all(opts)) {
                std::printf("[%s] %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id,
                            r.name.c_str(), r.detail.c_str());
                all_pass = all_pass && r.pass;
            }
            return all_pass ? kExitOk : kExitCrosscheck;
        }
    } catch (const sqfcs::CrosscheckError& e) {
        std::fprintf(stderr, "cross-check failure: %s\n", e.what());
        return kExitCrosscheck;
    } catch (const sqfcs::ValidationError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
