#pragma once

#include "fdam/rng.hpp"
#include "fdam/tensor.hpp"

namespace fdam {

struct AttentionConfig {
    index_t heads = 4;
    index_t channels = 64;  // total C; per-head dim is channels/heads
    index_t height = 14;
    index_t width = 14;

    index_t tokens() const { return height * width; }
    index_t head_dim() const { return channels / heads; }
    void validate() const;
};

// Per-head row-stochastic attention over flattened spatial positions; row
// p*W+q, reshaped to H x W, is the spatial filter acting at location (p,q).
struct AttentionMaps {
    index_t height = 0;
    index_t width = 0;
    Tensor maps;  // [heads x (HW) x (HW)]

    index_t heads() const { return maps.rank() == 3 ? maps.dim(0) : 0; }
    index_t tokens() const { return height * width; }
};

// Q/K/V and output projections, each [C x C] weight + [C] bias acting on
// token channel vectors.
struct MhsaParams {
    Tensor wq, wk, wv, wo;
    Tensor bq, bk, bv, bo;
};

// Layout change only: x[C x H x W] <-> tokens[(HW) x C], token index p*W+q.
Tensor tokens_from_features(const Tensor& x);
Tensor features_from_tokens(const Tensor& tokens, index_t height, index_t width);

// tokens * w^T + b, row-wise.
Tensor project_tokens(const Tensor& tokens, const Tensor& w, const Tensor& b);

// softmax(Q_h K_h^T / sqrt(C/heads)) per head.
AttentionMaps compute_attention(const Tensor& x, const MhsaParams& params,
                                const AttentionConfig& cfg);

// out[h,:,p] = sum_j maps[h,p,j] * v[h,:,j]; v is [heads x (C/heads) x (HW)].
Tensor apply_attention(const AttentionMaps& maps, const Tensor& v);

// Row p*W+q of the head's map reshaped to [H x W].
Tensor extract_query_filter(const AttentionMaps& maps, index_t head, index_t p, index_t q);

struct MhsaResult {
    Tensor output;  // [C x H x W]
    AttentionMaps maps;
};

// Full multi-head attention with output projection; no residual here.
MhsaResult mhsa_forward(const Tensor& x, const MhsaParams& params, const AttentionConfig& cfg);

// Same value/output path but with caller-supplied (possibly modulated,
// non-row-stochastic) maps of shape [heads x (HW) x (HW)].
Tensor attention_output(const Tensor& x, const MhsaParams& params, const AttentionConfig& cfg,
                        const Tensor& maps);

// Weights ~ N(0, 1/C) entrywise, biases zero. Draw order is fixed.
MhsaParams random_mhsa_params(const AttentionConfig& cfg, Rng& rng);

}  // namespace fdam
