#include <CLI11.hpp>

#include "ratingforge/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ratingforge: optimal rating design solver and verifier"};

    ratingforge::RunConfig cfg;
    app.add_option("--config", cfg.config_path, "problem configuration JSON")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", cfg.out_dir, "output directory")->required();
    app.add_option("--command", cfg.command,
                   "solve-deterministic | classify | check-conditions | oracle-compare | "
                   "stochastic-audit | signaling | fee-design")
        ->required();
    app.add_option("--grid-n", cfg.grid_n, "grid size override (command-specific)");
    app.add_flag("--quiet", cfg.quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);
    return ratingforge::run(cfg);
}
