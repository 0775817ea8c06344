#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "tfns/errors.hpp"
#include "tfns/experiment.hpp"
#include "tfns/version.hpp"

// Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.
// Every flag falls back to an environment variable with the TFNS_ prefix.
int main(int argc, char** argv) {
    CLI::App app{"Time-fractional incompressible flow experiments on the periodic torus"};
    app.set_version_flag("--version", std::string(tfns::kVersion));
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    auto* opt_config = app.add_option("--config", config_path, "JSON config file")
                           ->envname("TFNS_CONFIG");
    auto* opt_output = app.add_option("--output", output_dir, "output directory override")
                           ->envname("TFNS_OUTPUT");
    auto* opt_seed =
        app.add_option("--seed", seed, "overrides the initial-data and ensemble seeds")
            ->envname("TFNS_SEED");
    auto* opt_threads =
        app.add_option("--threads", threads, "thread count, 0 keeps the runtime default")
            ->envname("TFNS_THREADS");

    app.add_subcommand("simulate", "march the mild-form solver, write diagnostics and snapshots");
    app.add_subcommand("limit-check",
                       "gap to the classical integrator over an alpha sequence approaching 1");
    app.add_subcommand("uniqueness", "two-initialization fixed-point run and its integral metric");
    app.add_subcommand("estimates", "inequality and regularity-quotient ensemble");
    app.add_subcommand("gronwall-check", "integral-hypothesis envelope checker");
    app.add_subcommand("specfun", "tabulate a special function on an argument grid");
    app.add_subcommand("fracops", "apply a memory operator to a sampled signal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help and version leave through here with success
    }
    const std::string experiment = app.get_subcommands().front()->get_name();

    try {
        tfns::experiment::ExperimentConfig cfg;
        if (opt_config->count() > 0) cfg = tfns::experiment::load_config(config_path);
        cfg.experiment = experiment;
        if (opt_output->count() > 0) cfg.output_dir = output_dir;
        if (opt_seed->count() > 0) {
            cfg.initial_data.seed = seed;
            cfg.estimates.seed = seed;
        }
        if (opt_threads->count() > 0) cfg.threads = threads;
        tfns::experiment::run(cfg);
        return 0;
    } catch (const tfns::config_error& e) {
        std::fprintf(stderr, "%s: config error: %s\n", experiment.c_str(), e.what());
        return 2;
    } catch (const tfns::io_error& e) {
        std::fprintf(stderr, "%s: io error: %s\n", experiment.c_str(), e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "%s: invalid input: %s\n", experiment.c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: numerical failure: %s\n", experiment.c_str(), e.what());
        return 3;
    }
}
