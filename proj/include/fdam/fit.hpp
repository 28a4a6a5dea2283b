#pragma once

#include <string>
#include <vector>

#include "fdam/stack.hpp"
#include "fdam/tensor.hpp"

namespace fdam {

enum class TargetKind { lowpass, highpass, bandpass, bandstop, random };

TargetKind target_kind_from_string(const std::string& name);
std::string to_string(TargetKind kind);

struct TargetSpec {
    TargetKind kind = TargetKind::highpass;
    double cutoff = 0.5;  // lowpass/highpass threshold radius
    double low = 0.25;    // bandpass/bandstop lower radius
    double high = 0.75;   // bandpass/bandstop upper radius
    index_t bands = 8;    // shells for the random kind
    Seed seed;            // random kind only
};

// Magnitude target in centered layout (DC at (floor(H/2), floor(W/2))).
struct FitTarget {
    TargetKind kind = TargetKind::highpass;
    Tensor magnitude;  // [H x W], centered
};

// lowpass: 1 where rho < cutoff; highpass: 1 where rho >= cutoff;
// bandpass: 1 where low <= rho < high; bandstop: its complement;
// random: per-Chebyshev-shell uniform [0,1) values, seeded.
FitTarget build_target(const TargetSpec& spec, index_t height, index_t width);

enum class FitMode { baseline, attinv };

// attinv: values = [sbar_1..sbar_L, shat_1..shat_L], unconstrained.
// baseline: values = [g_1..g_L]; effective pair is (exp(g_i), 0), keeping
// gains positive.
struct FitParams {
    FitMode mode = FitMode::attinv;
    std::vector<double> values;

    index_t layer_count() const;
    // Effective (sbar_i, shat_i).
    void pair(index_t i, double& sbar, double& shat) const;
};

FitParams initial_fit_params(FitMode mode, index_t layers);

// Composed response R(u,v) = prod_i (sbar_i F(A_i) + shat_i F(A^_i)) over the
// fixed per-layer center-query spectra; loss = mean over bins of
// (|R| - target)^2.
double fit_loss(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra,
                const FitTarget& target);

// Analytic gradient of fit_loss w.r.t. params.values. Bins with |R| < 1e-12
// contribute zero (subgradient choice at the |.| kink).
std::vector<double> fit_grad(const FitParams& params,
                             const std::vector<LayerSpectrumPair>& spectra,
                             const FitTarget& target);

// Max discrepancy between fit_grad and central finite differences; components
// with |analytic| < 1e-8 are compared absolutely at that scale, the rest
// relatively.
double check_fit_gradient(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra,
                          const FitTarget& target, double h = 1e-5);

// Centered |R| grid at the given params (for plot-ready export).
Tensor composed_magnitude(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra);

struct FitSettings {
    double initial_step = 0.1;
    index_t max_iterations = 2000;
    double grad_tolerance = 1e-8;
};

struct FitReport {
    FitMode mode = FitMode::attinv;
    double final_loss = 0.0;
    std::vector<double> loss_trace;  // initial loss, then one entry per accepted step
    FitParams params;
    index_t iterations = 0;
    bool converged = false;          // gradient tolerance hit before the cap
    double wall_clock_seconds = 0.0; // console-only; never serialized
};

// Gradient descent with Armijo backtracking (halve the step until
// f(x - a g) <= f(x) - 1e-4 a |g|^2, starting from initial_step each
// iteration). Deterministic init via initial_fit_params. Throws on non-finite
// loss.
FitReport fit(FitMode mode, const std::vector<LayerSpectrumPair>& spectra,
              const FitTarget& target, const FitSettings& settings = {});

}  // namespace fdam
