#pragma once

#include <cstdint>
#include <vector>

#include "fdam/attention.hpp"
#include "fdam/attinv.hpp"
#include "fdam/diagnostics.hpp"
#include "fdam/freqscale.hpp"
#include "fdam/rng.hpp"

namespace fdam {

enum class StackMode { plain, attinv, attinv_freqscale };

// Sub-stream ids hung off the run seed. Fixed so that runs differing only in
// mode share attention parameters and input noise.
inline constexpr std::uint64_t kStreamMhsa = 1;
inline constexpr std::uint64_t kStreamAttInv = 2;
inline constexpr std::uint64_t kStreamFreqScale = 3;
inline constexpr std::uint64_t kStreamInput = 4;
inline constexpr std::uint64_t kStreamTarget = 5;
inline constexpr std::uint64_t kStreamFitCheck = 6;

struct StackConfig {
    index_t layers = 12;  // L >= 0; L == 0 means diagnostics on the input only
    StackMode mode = StackMode::plain;
    AttentionConfig attention;
    bool residual = true;

    // AttInv combination predictor: kernel size and bias logits for the
    // low/high channel halves. (0,0) biases start the fields near 0.5.
    index_t attinv_kernel = 3;
    double attinv_bias_low = 2.0;
    double attinv_bias_high = -2.0;

    // FreqScale geometry; static_scale 0 keeps the module an exact identity.
    index_t freq_groups = 4;
    index_t freq_bases = 4;
    index_t freq_band = 4;
    double freq_static_scale = 0.0;

    Seed seed;

    void validate() const;
};

struct StackLayer {
    MhsaParams mhsa;
    AttInvParams attinv;        // allocated only for attinv modes
    FreqScaleParams freqscale;  // allocated only for attinv_freqscale
};

struct Stack {
    StackConfig cfg;
    std::vector<StackLayer> layers;
};

// Deterministic function of cfg.seed; layer i's parameters come from
// sub-streams derived((stream, i)).
Stack build_stack(const StackConfig& cfg);

// Standard-normal features [C x H x W].
Tensor white_noise(index_t channels, index_t height, index_t width, Rng& rng);

// Frequency responses of one layer's center-query (H/2, W/2) head-0 filter:
// plain = F(A), inverted = F(e - A).
struct LayerSpectrumPair {
    ComplexTensor plain;
    ComplexTensor inverted;
};

struct ForwardOptions {
    bool compute_diagnostics = true;
    bool collect_spectra = false;
    index_t bands = 8;
    double cutoff = 0.5;
};

struct ForwardResult {
    Tensor final_features;
    // L+1 entries when enabled: index 0 is the input, i is after layer i.
    std::vector<LayerDiagnostics> diagnostics;
    // L entries when enabled.
    std::vector<LayerSpectrumPair> layer_spectra;
};

// Residual recursion x <- x + layer(x) (no normalization); FreqScale applies
// after the attention sub-layer, before the residual add.
ForwardResult run_forward(const Stack& stack, const Tensor& x0, const ForwardOptions& opts = {});

// Feature-level diagnostics used per layer by run_forward.
LayerDiagnostics feature_diagnostics(const Tensor& x, index_t layer_index, index_t bands,
                                     double cutoff);

}  // namespace fdam
