#include "fdam/attention.hpp"

#include <cmath>

#include "fdam/linalg.hpp"

namespace fdam {

void AttentionConfig::validate() const {
    require(heads >= 1, "AttentionConfig: heads must be >= 1");
    require(channels >= 1, "AttentionConfig: channels must be >= 1");
    require(channels % heads == 0, "AttentionConfig: channels must be divisible by heads");
    require(height >= 1 && width >= 1, "AttentionConfig: spatial extents must be >= 1");
}

namespace {

void check_features(const Tensor& x, const AttentionConfig& cfg, const char* who) {
    require(x.rank() == 3 && x.dim(0) == cfg.channels && x.dim(1) == cfg.height &&
                x.dim(2) == cfg.width,
            std::string(who) + ": feature shape disagrees with AttentionConfig");
}

void check_params(const MhsaParams& p, const AttentionConfig& cfg, const char* who) {
    const index_t c = cfg.channels;
    for (const Tensor* w : {&p.wq, &p.wk, &p.wv, &p.wo}) {
        require(w->rank() == 2 && w->dim(0) == c && w->dim(1) == c,
                std::string(who) + ": projection weight must be [C x C]");
    }
    for (const Tensor* b : {&p.bq, &p.bk, &p.bv, &p.bo}) {
        require(b->rank() == 1 && b->dim(0) == c, std::string(who) + ": projection bias must be [C]");
    }
}

// tokens[(HW) x C] -> per-head value layout [heads x d x (HW)].
Tensor split_heads(const Tensor& tokens, index_t heads) {
    const index_t n = tokens.dim(0), c = tokens.dim(1), d = c / heads;
    Tensor out({heads, d, n});
    for (index_t h = 0; h < heads; ++h)
        for (index_t k = 0; k < d; ++k)
            for (index_t j = 0; j < n; ++j) out(h, k, j) = tokens(j, h * d + k);
    return out;
}

Tensor merge_heads(const Tensor& v) {
    const index_t heads = v.dim(0), d = v.dim(1), n = v.dim(2);
    Tensor tokens({n, heads * d});
    for (index_t h = 0; h < heads; ++h)
        for (index_t k = 0; k < d; ++k)
            for (index_t j = 0; j < n; ++j) tokens(j, h * d + k) = v(h, k, j);
    return tokens;
}

Tensor apply_maps_tensor(const Tensor& maps, const Tensor& v, const char* who) {
    require(maps.rank() == 3 && maps.dim(1) == maps.dim(2),
            std::string(who) + ": maps must be [heads x N x N]");
    require(v.rank() == 3 && v.dim(0) == maps.dim(0) && v.dim(2) == maps.dim(1),
            std::string(who) + ": value shape disagrees with maps");
    const index_t heads = maps.dim(0), d = v.dim(1), n = maps.dim(1);
    Tensor out({heads, d, n});
#pragma omp parallel for collapse(2) if (heads * d > 1)
    for (index_t h = 0; h < heads; ++h) {
        for (index_t k = 0; k < d; ++k) {
            for (index_t p = 0; p < n; ++p) {
                double acc = 0.0;
                for (index_t j = 0; j < n; ++j) acc += maps(h, p, j) * v(h, k, j);
                out(h, k, p) = acc;
            }
        }
    }
    return out;
}

}  // namespace

Tensor tokens_from_features(const Tensor& x) {
    require(x.rank() == 3, "tokens_from_features: expected [C x H x W]");
    const index_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
    Tensor t({h * w, c});
    for (index_t ch = 0; ch < c; ++ch)
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) t(i * w + j, ch) = x(ch, i, j);
    return t;
}

Tensor features_from_tokens(const Tensor& tokens, index_t height, index_t width) {
    require(tokens.rank() == 2, "features_from_tokens: expected [(HW) x C]");
    require(tokens.dim(0) == height * width, "features_from_tokens: token count != H*W");
    const index_t c = tokens.dim(1);
    Tensor x({c, height, width});
    for (index_t ch = 0; ch < c; ++ch)
        for (index_t i = 0; i < height; ++i)
            for (index_t j = 0; j < width; ++j) x(ch, i, j) = tokens(i * width + j, ch);
    return x;
}

Tensor project_tokens(const Tensor& tokens, const Tensor& w, const Tensor& b) {
    Tensor out = matmul(tokens, transpose(w));
    for (index_t i = 0; i < out.dim(0); ++i)
        for (index_t j = 0; j < out.dim(1); ++j) out(i, j) += b(j);
    return out;
}

AttentionMaps compute_attention(const Tensor& x, const MhsaParams& params,
                                const AttentionConfig& cfg) {
    cfg.validate();
    check_features(x, cfg, "compute_attention");
    check_params(params, cfg, "compute_attention");

    const index_t n = cfg.tokens(), d = cfg.head_dim();
    const Tensor tokens = tokens_from_features(x);
    const Tensor q = project_tokens(tokens, params.wq, params.bq);
    const Tensor k = project_tokens(tokens, params.wk, params.bk);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));

    AttentionMaps out;
    out.height = cfg.height;
    out.width = cfg.width;
    out.maps = Tensor({cfg.heads, n, n});
    for (index_t h = 0; h < cfg.heads; ++h) {
        Tensor logits({n, n});
#pragma omp parallel for if (n > 1)
        for (index_t p = 0; p < n; ++p) {
            for (index_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (index_t t = 0; t < d; ++t) acc += q(p, h * d + t) * k(j, h * d + t);
                logits(p, j) = acc * scale;
            }
        }
        const Tensor rows = softmax_rows(logits);
        for (index_t p = 0; p < n; ++p)
            for (index_t j = 0; j < n; ++j) out.maps(h, p, j) = rows(p, j);
    }
    return out;
}

Tensor apply_attention(const AttentionMaps& maps, const Tensor& v) {
    return apply_maps_tensor(maps.maps, v, "apply_attention");
}

Tensor extract_query_filter(const AttentionMaps& maps, index_t head, index_t p, index_t q) {
    require(maps.maps.rank() == 3, "extract_query_filter: invalid maps");
    require(head >= 0 && head < maps.heads(), "extract_query_filter: head out of range");
    require(p >= 0 && p < maps.height && q >= 0 && q < maps.width,
            "extract_query_filter: query location out of range");
    Tensor filter({maps.height, maps.width});
    const index_t row = p * maps.width + q;
    for (index_t i = 0; i < maps.height; ++i)
        for (index_t j = 0; j < maps.width; ++j) filter(i, j) = maps.maps(head, row, i * maps.width + j);
    return filter;
}

Tensor attention_output(const Tensor& x, const MhsaParams& params, const AttentionConfig& cfg,
                        const Tensor& maps) {
    cfg.validate();
    check_features(x, cfg, "attention_output");
    check_params(params, cfg, "attention_output");
    require(maps.rank() == 3 && maps.dim(0) == cfg.heads && maps.dim(1) == cfg.tokens() &&
                maps.dim(2) == cfg.tokens(),
            "attention_output: maps shape disagrees with config");

    const Tensor tokens = tokens_from_features(x);
    const Tensor values = split_heads(project_tokens(tokens, params.wv, params.bv), cfg.heads);
    const Tensor attended = apply_maps_tensor(maps, values, "attention_output");
    const Tensor merged = merge_heads(attended);
    const Tensor projected = project_tokens(merged, params.wo, params.bo);
    return features_from_tokens(projected, cfg.height, cfg.width);
}

MhsaResult mhsa_forward(const Tensor& x, const MhsaParams& params, const AttentionConfig& cfg) {
    MhsaResult res;
    res.maps = compute_attention(x, params, cfg);
    res.output = attention_output(x, params, cfg, res.maps.maps);
    return res;
}

MhsaParams random_mhsa_params(const AttentionConfig& cfg, Rng& rng) {
    cfg.validate();
    const index_t c = cfg.channels;
    const double scale = 1.0 / std::sqrt(static_cast<double>(c));
    MhsaParams p;
    for (Tensor* w : {&p.wq, &p.wk, &p.wv, &p.wo}) {
        *w = rng.normal_tensor({c, c}, scale);
    }
    for (Tensor* b : {&p.bq, &p.bk, &p.bv, &p.bo}) {
        *b = Tensor({c});
    }
    return p;
}

}  // namespace fdam
