#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fdam/stack.hpp"

namespace fdam {

struct DiagnosticsConfig {
    index_t bands = 8;
    double cutoff = 0.5;
};

struct FitConfig {
    std::vector<std::string> targets = {"highpass", "bandpass", "bandstop", "random"};
    double cutoff = 0.5;  // lowpass/highpass radius
    double low = 0.25;    // bandpass/bandstop radii
    double high = 0.75;
    index_t max_iterations = 2000;
    double initial_step = 0.1;
    double grad_tolerance = 1e-8;
};

struct InputConfig {
    std::string kind = "white_noise";  // or "tensor_file"
    std::string path;                  // tensor_file only
};

struct ExperimentConfig {
    StackConfig stack;
    DiagnosticsConfig diagnostics;
    FitConfig fit;
    InputConfig input;
    nlohmann::json snapshot;  // the config file exactly as parsed
};

// Strict parse: unknown fields, wrong types, and invalid values all throw
// with the offending field named. Missing fields take the defaults above.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

std::string to_string(StackMode mode);
StackMode stack_mode_from_string(const std::string& name);

}  // namespace fdam
