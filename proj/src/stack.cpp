#include "fdam/stack.hpp"

#include "fdam/fft.hpp"

namespace fdam {

void StackConfig::validate() const {
    require(layers >= 0, "StackConfig: layers must be >= 0");
    attention.validate();
    require(attinv_kernel >= 1 && attinv_kernel % 2 == 1,
            "StackConfig: attinv_kernel must be odd");
    require(freq_groups >= 1 && attention.channels % freq_groups == 0,
            "StackConfig: channels must be divisible by freq_groups");
    require(freq_bases >= 1, "StackConfig: freq_bases must be >= 1");
    require(freq_band >= 1 && freq_band <= attention.height && freq_band <= attention.width,
            "StackConfig: freq_band must fit the spatial grid");
    require(freq_static_scale >= 0.0, "StackConfig: freq_static_scale must be >= 0");
}

Stack build_stack(const StackConfig& cfg) {
    cfg.validate();
    const Rng root{cfg.seed};
    Stack stack;
    stack.cfg = cfg;
    stack.layers.reserve(static_cast<std::size_t>(cfg.layers));
    for (index_t i = 0; i < cfg.layers; ++i) {
        StackLayer layer;
        Rng mhsa_rng = root.derived(kStreamMhsa).derived(static_cast<std::uint64_t>(i));
        layer.mhsa = random_mhsa_params(cfg.attention, mhsa_rng);
        if (cfg.mode != StackMode::plain) {
            Rng attinv_rng = root.derived(kStreamAttInv).derived(static_cast<std::uint64_t>(i));
            layer.attinv = random_attinv_params(cfg.attention, cfg.attinv_kernel,
                                                cfg.attinv_bias_low, cfg.attinv_bias_high,
                                                attinv_rng);
        }
        if (cfg.mode == StackMode::attinv_freqscale) {
            Rng fs_rng = root.derived(kStreamFreqScale).derived(static_cast<std::uint64_t>(i));
            layer.freqscale =
                random_freqscale_params(cfg.attention.channels, cfg.freq_groups, cfg.freq_bases,
                                        cfg.freq_band, cfg.freq_static_scale, fs_rng);
        }
        stack.layers.push_back(std::move(layer));
    }
    return stack;
}

Tensor white_noise(index_t channels, index_t height, index_t width, Rng& rng) {
    return rng.normal_tensor({channels, height, width});
}

LayerDiagnostics feature_diagnostics(const Tensor& x, index_t layer_index, index_t bands,
                                     double cutoff) {
    LayerDiagnostics d;
    d.layer_index = layer_index;
    d.high_freq_ratio = high_freq_ratio(x, cutoff);
    const Tensor tokens = tokens_from_features(x);
    d.effective_rank = effective_rank(tokens);
    d.mean_patch_cosine = patch_cosine_similarity(tokens);
    d.profile = radial_profile(channel_magnitudes(x), bands);
    return d;
}

namespace {

LayerSpectrumPair center_spectra(const AttentionMaps& maps) {
    const index_t p = maps.height / 2, q = maps.width / 2;
    const Tensor filter = extract_query_filter(maps, 0, p, q);
    Tensor complement({maps.height, maps.width});
    for (index_t i = 0; i < maps.height; ++i)
        for (index_t j = 0; j < maps.width; ++j)
            complement(i, j) = (i == p && j == q ? 1.0 : 0.0) - filter(i, j);
    return LayerSpectrumPair{dft2(filter), dft2(complement)};
}

}  // namespace

ForwardResult run_forward(const Stack& stack, const Tensor& x0, const ForwardOptions& opts) {
    const StackConfig& cfg = stack.cfg;
    const AttentionConfig& att = cfg.attention;
    require(x0.rank() == 3 && x0.dim(0) == att.channels && x0.dim(1) == att.height &&
                x0.dim(2) == att.width,
            "run_forward: input shape disagrees with stack config");
    require(static_cast<index_t>(stack.layers.size()) == cfg.layers,
            "run_forward: stack layer count disagrees with its config");

    ForwardResult res;
    Tensor x = x0;
    if (opts.compute_diagnostics)
        res.diagnostics.push_back(feature_diagnostics(x, 0, opts.bands, opts.cutoff));

    for (index_t i = 0; i < cfg.layers; ++i) {
        const StackLayer& layer = stack.layers[static_cast<std::size_t>(i)];
        const AttentionMaps maps = compute_attention(x, layer.mhsa, att);
        if (opts.collect_spectra) res.layer_spectra.push_back(center_spectra(maps));

        Tensor y;
        if (cfg.mode == StackMode::plain) {
            y = attention_output(x, layer.mhsa, att, maps.maps);
        } else {
            const Tensor inverted = invert_attention(maps);
            const CombinationField field = predict_combination(x, layer.attinv);
            const Tensor modulated = attinv_combine(maps, inverted, field);
            y = attention_output(x, layer.mhsa, att, modulated);
            if (cfg.mode == StackMode::attinv_freqscale) {
                const Tensor weights = freqscale_weights(y, layer.freqscale);
                y = freqscale_apply(y, weights);
            }
        }
        if (cfg.residual) add_inplace(y, x);
        x = std::move(y);

        if (opts.compute_diagnostics)
            res.diagnostics.push_back(feature_diagnostics(x, i + 1, opts.bands, opts.cutoff));
    }
    res.final_features = std::move(x);
    return res;
}

}  // namespace fdam
