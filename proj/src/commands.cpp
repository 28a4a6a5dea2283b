#include "fdam/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "fdam/config.hpp"
#include "fdam/fit.hpp"
#include "fdam/manifest.hpp"
#include "fdam/tensor_io.hpp"

namespace fdam {

namespace {

void ensure_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error(out_dir + ": cannot create output directory");
}

ExperimentConfig load_run_config(const RunOptions& options) {
    if (options.config_path.empty()) throw_invalid("--config is required");
    ExperimentConfig cfg = load_config(options.config_path);
    if (options.has_seed_override) cfg.stack.seed.value = options.seed_override;
    return cfg;
}

Tensor load_input(const ExperimentConfig& cfg, const Rng& root) {
    const AttentionConfig& att = cfg.stack.attention;
    if (cfg.input.kind == "tensor_file") {
        Tensor x = read_tensor(cfg.input.path);
        require(x.rank() == 3 && x.dim(0) == att.channels && x.dim(1) == att.height &&
                    x.dim(2) == att.width,
                cfg.input.path + ": imported tensor shape disagrees with stack config");
        return x;
    }
    Rng rng = root.derived(kStreamInput);
    return white_noise(att.channels, att.height, att.width, rng);
}

// Mean over channels of the centered magnitude spectra.
Tensor mean_spectrum(const Tensor& features) {
    const std::vector<Tensor> mags = channel_magnitudes(features);
    Tensor mean(mags.front().shape());
    for (const Tensor& m : mags) add_inplace(mean, m);
    return scaled(mean, 1.0 / static_cast<double>(mags.size()));
}

std::string radial_profile_csv(const RadialProfile& profile) {
    std::string out = "band,edge_low,edge_high,mean_magnitude,std_magnitude,bins\n";
    const std::size_t bands = profile.mean_magnitude.size();
    for (std::size_t b = 0; b < bands; ++b) {
        out += std::to_string(b);
        out.push_back(',');
        out += format_double(profile.band_edges[b]);
        out.push_back(',');
        out += format_double(profile.band_edges[b + 1]);
        out.push_back(',');
        if (profile.bin_count[b] > 0) out += format_double(profile.mean_magnitude[b]);
        out.push_back(',');
        if (profile.bin_count[b] > 0) out += format_double(profile.std_magnitude[b]);
        out.push_back(',');
        out += std::to_string(profile.bin_count[b]);
        out.push_back('\n');
    }
    return out;
}

std::string loss_trace_csv(const FitReport& report) {
    std::string out = "iteration,loss\n";
    for (std::size_t i = 0; i < report.loss_trace.size(); ++i) {
        out += std::to_string(i);
        out.push_back(',');
        out += format_double(report.loss_trace[i]);
        out.push_back('\n');
    }
    return out;
}

nlohmann::json report_json(const FitReport& report) {
    nlohmann::json j;
    j["mode"] = report.mode == FitMode::baseline ? "baseline" : "attinv";
    j["final_loss"] = report.final_loss;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["params"] = report.params.values;
    return j;
}

void say(const RunOptions& options, const std::string& line) {
    if (!options.quiet) std::printf("%s\n", line.c_str());
}

}  // namespace

int cmd_analyze(const RunOptions& options) {
    try {
        const ExperimentConfig cfg = load_run_config(options);
        ensure_out_dir(options.out_dir);
        const Rng root{cfg.stack.seed};

        const Stack stack = build_stack(cfg.stack);
        const Tensor x0 = load_input(cfg, root);

        ForwardOptions fwd;
        fwd.compute_diagnostics = true;
        fwd.bands = cfg.diagnostics.bands;
        fwd.cutoff = cfg.diagnostics.cutoff;
        const ForwardResult result = run_forward(stack, x0, fwd);

        // One row per layer (the layer-0 input entry stays internal).
        std::vector<LayerDiagnostics> rows(result.diagnostics.begin() + 1,
                                           result.diagnostics.end());
        std::vector<std::string> outputs;
        write_text_file(options.out_dir + "/diagnostics.csv",
                        rows.empty() ? diagnostics_csv_header(cfg.diagnostics.bands)
                                     : diagnostics_csv(rows));
        outputs.push_back("diagnostics.csv");

        write_tensor(options.out_dir + "/features_final.fdam", result.final_features);
        outputs.push_back("features_final.fdam");

        write_csv_matrix(options.out_dir + "/spectrum_final.csv",
                         mean_spectrum(result.final_features));
        outputs.push_back("spectrum_final.csv");

        write_manifest(options.out_dir, "analyze", cfg.stack.seed.value, cfg.snapshot, outputs);
        say(options, "analyze: mode=" + to_string(cfg.stack.mode) + " layers=" +
                         std::to_string(cfg.stack.layers) + " seed=" +
                         std::to_string(cfg.stack.seed.value));
        for (const LayerDiagnostics& d : result.diagnostics) {
            say(options, "  layer " + std::to_string(d.layer_index) +
                             ": high_freq_ratio=" + format_double(d.high_freq_ratio) +
                             " effective_rank=" + format_double(d.effective_rank) +
                             " mean_patch_cosine=" + format_double(d.mean_patch_cosine));
        }
        say(options, "analyze: wrote " + std::to_string(outputs.size() + 1) + " files to " +
                         options.out_dir);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_fit(const RunOptions& options) {
    try {
        const ExperimentConfig cfg = load_run_config(options);
        ensure_out_dir(options.out_dir);
        const Rng root{cfg.stack.seed};

        // The fitting experiment works over fixed plain-attention spectra.
        StackConfig plain_cfg = cfg.stack;
        plain_cfg.mode = StackMode::plain;
        require(plain_cfg.layers >= 1, "fit: stack.layers must be >= 1");
        const Stack stack = build_stack(plain_cfg);
        const Tensor x0 = load_input(cfg, root);

        ForwardOptions fwd;
        fwd.compute_diagnostics = false;
        fwd.collect_spectra = true;
        const ForwardResult result = run_forward(stack, x0, fwd);

        FitSettings settings;
        settings.initial_step = cfg.fit.initial_step;
        settings.max_iterations = cfg.fit.max_iterations;
        settings.grad_tolerance = cfg.fit.grad_tolerance;

        std::vector<std::string> outputs;
        nlohmann::json report;
        report["settings"] = {{"initial_step", settings.initial_step},
                              {"max_iterations", settings.max_iterations},
                              {"grad_tolerance", settings.grad_tolerance}};
        nlohmann::json targets = nlohmann::json::array();

        const index_t h = cfg.stack.attention.height, w = cfg.stack.attention.width;
        for (const std::string& name : cfg.fit.targets) {
            TargetSpec spec;
            spec.kind = target_kind_from_string(name);
            spec.cutoff = cfg.fit.cutoff;
            spec.low = cfg.fit.low;
            spec.high = cfg.fit.high;
            spec.bands = cfg.diagnostics.bands;
            spec.seed = root.derived(kStreamTarget).seed();
            const FitTarget target = build_target(spec, h, w);

            const FitReport baseline = fit(FitMode::baseline, result.layer_spectra, target, settings);
            const FitReport attinv = fit(FitMode::attinv, result.layer_spectra, target, settings);

            write_csv_matrix(options.out_dir + "/target_" + name + ".csv", target.magnitude);
            outputs.push_back("target_" + name + ".csv");
            for (const FitReport* r : {&baseline, &attinv}) {
                const std::string mode = r->mode == FitMode::baseline ? "baseline" : "attinv";
                write_text_file(options.out_dir + "/loss_trace_" + name + "_" + mode + ".csv",
                                loss_trace_csv(*r));
                outputs.push_back("loss_trace_" + name + "_" + mode + ".csv");
                write_csv_matrix(options.out_dir + "/fitted_" + name + "_" + mode + ".csv",
                                 composed_magnitude(r->params, result.layer_spectra));
                outputs.push_back("fitted_" + name + "_" + mode + ".csv");
            }

            nlohmann::json entry;
            entry["target"] = name;
            entry["baseline"] = report_json(baseline);
            entry["attinv"] = report_json(attinv);
            targets.push_back(entry);

            say(options, "fit " + name + ": baseline final_loss=" +
                             format_double(baseline.final_loss) + " (" +
                             format_double(baseline.wall_clock_seconds) + "s), attinv final_loss=" +
                             format_double(attinv.final_loss) + " (" +
                             format_double(attinv.wall_clock_seconds) + "s)");
        }
        report["targets"] = targets;
        write_text_file(options.out_dir + "/fit_report.json", report.dump(2) + "\n");
        outputs.push_back("fit_report.json");

        write_manifest(options.out_dir, "fit", cfg.stack.seed.value, cfg.snapshot, outputs);
        say(options, "fit: wrote " + std::to_string(outputs.size() + 1) + " files to " +
                         options.out_dir);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_spectrum(const SpectrumOptions& options) {
    try {
        if (options.input_path.empty()) throw_invalid("--input is required");
        require(options.bands >= 2, "spectrum: --bands must be >= 2");
        ensure_out_dir(options.out_dir);

        Tensor x = read_tensor(options.input_path);
        require(x.rank() == 2 || x.rank() == 3,
                options.input_path + ": expected a rank-2 or rank-3 tensor");
        if (x.rank() == 2) x = Tensor({1, x.dim(0), x.dim(1)}, x.values());

        const std::vector<Tensor> mags = channel_magnitudes(x);
        Tensor mean(mags.front().shape());
        for (const Tensor& m : mags) add_inplace(mean, m);
        mean = scaled(mean, 1.0 / static_cast<double>(mags.size()));

        std::vector<std::string> outputs;
        write_csv_matrix(options.out_dir + "/spectrum.csv", mean);
        outputs.push_back("spectrum.csv");
        write_text_file(options.out_dir + "/radial_profile.csv",
                        radial_profile_csv(radial_profile(mags, options.bands)));
        outputs.push_back("radial_profile.csv");

        nlohmann::json snapshot;
        snapshot["input"] = options.input_path;
        snapshot["bands"] = options.bands;
        write_manifest(options.out_dir, "spectrum", 0, snapshot, outputs);
        if (!options.quiet)
            std::printf("spectrum: wrote %zu files to %s\n", outputs.size() + 1,
                        options.out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace fdam
