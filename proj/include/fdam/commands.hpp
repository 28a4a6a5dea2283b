#pragma once

#include <cstdint>
#include <string>

#include "fdam/tensor.hpp"

namespace fdam {

struct RunOptions {
    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
};

struct SpectrumOptions {
    std::string input_path;
    std::string out_dir = ".";
    index_t bands = 8;
    bool quiet = false;
};

// Build the configured stack, run it forward on the configured input, write
// diagnostics.csv (one row per layer), features_final.fdam,
// spectrum_final.csv, and manifest.json.
int cmd_analyze(const RunOptions& options);

// Collect per-layer center-query spectra from a plain-mode forward pass, fit
// baseline and attinv scalar parameters to each configured target, write
// per-target loss traces and magnitude grids, fit_report.json, and
// manifest.json.
int cmd_fit(const RunOptions& options);

// Read a raw tensor file ([H x W] or [C x H x W]), write its per-channel-mean
// centered magnitude spectrum (spectrum.csv), radial_profile.csv, and
// manifest.json.
int cmd_spectrum(const SpectrumOptions& options);

}  // namespace fdam
