#include <cstdint>

#include "CLI11.hpp"

#include "fdam/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"frequency-dynamic attention laboratory"};
    app.require_subcommand(1);

    fdam::RunOptions run;
    auto add_run_flags = [&run](CLI::App* cmd) {
        cmd->add_option("--config", run.config_path, "experiment config (JSON)")->required();
        cmd->add_option("--seed", run.seed_override, "override the config seed");
        cmd->add_option("--out", run.out_dir, "output directory (default: .)");
        cmd->add_flag("--quiet", run.quiet, "suppress progress output");
    };
    CLI::App* analyze =
        app.add_subcommand("analyze", "run a stack forward and export per-layer diagnostics");
    add_run_flags(analyze);
    CLI::App* fit = app.add_subcommand("fit", "fit composed frequency responses to target filters");
    add_run_flags(fit);

    fdam::SpectrumOptions spectrum_options;
    CLI::App* spectrum =
        app.add_subcommand("spectrum", "export the magnitude spectrum of a raw tensor file");
    spectrum->add_option("--input", spectrum_options.input_path, "raw tensor file")->required();
    spectrum->add_option("--out", spectrum_options.out_dir, "output directory (default: .)");
    spectrum->add_option("--bands", spectrum_options.bands, "radial profile band count (default: 8)");
    spectrum->add_flag("--quiet", spectrum_options.quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) {
        run.has_seed_override = analyze->count("--seed") > 0;
        return fdam::cmd_analyze(run);
    }
    if (fit->parsed()) {
        run.has_seed_override = fit->count("--seed") > 0;
        return fdam::cmd_fit(run);
    }
    return fdam::cmd_spectrum(spectrum_options);
}
