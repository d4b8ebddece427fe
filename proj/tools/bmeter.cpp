#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "bmeter/config.hpp"
#include "bmeter/run.hpp"

using namespace bmeter;

int main(int argc, char** argv) {
    CLI::App app{"bmeter - exact correlation, decoherence, probability and "
                 "Bell-CHSH evaluation for a multi-level system coupled to a "
                 "bosonic measurement apparatus"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    double tol_override = 0.0;
    int threads = 0;
    bool quick = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "run configuration file");
        if (config_required) opt->required();
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--tol", tol_override, "relative tolerance override");
        sub->add_option("--threads", threads, "worker thread count (0 = default)");
    };

    auto* sc_kernels = app.add_subcommand("kernels", "time kernels A, B, |F|, phi to CSV");
    add_common(sc_kernels, true);
    auto* sc_prob = app.add_subcommand("prob", "joint/conditional probe distributions");
    add_common(sc_prob, true);
    auto* sc_bell = app.add_subcommand("bell", "Bell-CHSH violation table");
    add_common(sc_bell, true);
    auto* sc_fig1 =
        app.add_subcommand("fig1", "canned probe-distribution figure data set");
    add_common(sc_fig1, false);
    auto* sc_verify = app.add_subcommand("verify", "run the brute-force oracle suite");
    add_common(sc_verify, false);
    sc_verify->add_flag("--quick", quick, "reduced case count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return run::kExitConfig;
    }

    config::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = config::parse_config(config_path);
        if (!out_override.empty()) cfg.out = out_override;
        if (tol_override > 0.0) cfg.rel_tol = tol_override;
        if (threads > 0) cfg.threads = threads;
        if (const char* env = std::getenv("BOSONIC_METER_THREADS")) {
            const int n = std::atoi(env);
            if (n > 0) cfg.threads = n;
        }
        cfg.finalize();
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return run::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return run::kExitConfig;
    }

    run::apply_threads(cfg.threads);

    try {
        if (sc_kernels->parsed()) return run::run_kernels(cfg);
        if (sc_prob->parsed()) return run::run_prob(cfg);
        if (sc_bell->parsed()) return run::run_bell(cfg);
        if (sc_fig1->parsed()) return run::run_fig1(cfg);
        if (sc_verify->parsed()) return run::run_verify(cfg, quick);
    } catch (const quad::QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (best estimate " << e.best_estimate.real() << "+"
                  << e.best_estimate.imag() << "i, error bound " << e.error_bound
                  << ")\n";
        return run::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return run::kExitNumerical;
    }
    return run::kExitOk;
}
