#include "fdam/attinv.hpp"

#include <cmath>

#include "fdam/nn.hpp"

namespace fdam {

Tensor invert_attention(const AttentionMaps& maps) {
    require(maps.maps.rank() == 3 && maps.maps.dim(1) == maps.maps.dim(2),
            "invert_attention: maps must be [heads x N x N]");
    require(maps.tokens() == maps.maps.dim(1), "invert_attention: H*W disagrees with map size");
    const index_t heads = maps.heads(), n = maps.tokens();
    Tensor out({heads, n, n});
    for (index_t h = 0; h < heads; ++h)
        for (index_t p = 0; p < n; ++p)
            for (index_t j = 0; j < n; ++j)
                out(h, p, j) = (p == j ? 1.0 : 0.0) - maps.maps(h, p, j);
    return out;
}

CombinationField predict_combination(const Tensor& x, const AttInvParams& params) {
    require(x.rank() == 3, "predict_combination: input must be [C x H x W]");
    require(params.kernel.rank() == 4 && params.kernel.dim(0) % 2 == 0,
            "predict_combination: kernel must produce 2*heads channels");
    const index_t heads = params.kernel.dim(0) / 2;
    const Tensor logits = conv2d(x, params.kernel, params.bias);
    const Tensor fields = sigmoid(logits);
    const index_t h = x.dim(1), w = x.dim(2);
    CombinationField out;
    out.low = Tensor({heads, h, w});
    out.high = Tensor({heads, h, w});
    for (index_t hd = 0; hd < heads; ++hd)
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) {
                out.low(hd, i, j) = fields(hd, i, j);
                out.high(hd, i, j) = fields(heads + hd, i, j);
            }
    return out;
}

Tensor attinv_combine(const AttentionMaps& maps, const Tensor& inverted,
                      const CombinationField& field) {
    const index_t heads = maps.heads(), n = maps.tokens();
    require(inverted.rank() == 3 && inverted.dim(0) == heads && inverted.dim(1) == n &&
                inverted.dim(2) == n,
            "attinv_combine: inverted shape disagrees with maps");
    require(field.low.rank() == 3 && field.low.dim(0) == heads && field.low.dim(1) == maps.height &&
                field.low.dim(2) == maps.width && field.high.same_shape(field.low),
            "attinv_combine: combination field shape disagrees with maps");
    Tensor out({heads, n, n});
#pragma omp parallel for if (heads * n > 1)
    for (index_t h = 0; h < heads; ++h) {
        for (index_t p = 0; p < n; ++p) {
            const double lo = field.low[h * n + p];
            const double hi = field.high[h * n + p];
            for (index_t j = 0; j < n; ++j)
                out(h, p, j) = lo * maps.maps(h, p, j) + hi * inverted(h, p, j);
        }
    }
    return out;
}

AttInvParams random_attinv_params(const AttentionConfig& cfg, index_t kernel_size,
                                  double bias_low, double bias_high, Rng& rng) {
    cfg.validate();
    require(kernel_size >= 1 && kernel_size % 2 == 1,
            "random_attinv_params: kernel size must be odd");
    const index_t c = cfg.channels, k = kernel_size, out_ch = 2 * cfg.heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(c * k * k));
    AttInvParams p;
    p.kernel = rng.normal_tensor({out_ch, c, k, k}, scale);
    p.bias = Tensor({out_ch});
    for (index_t i = 0; i < cfg.heads; ++i) {
        p.bias(i) = bias_low;
        p.bias(cfg.heads + i) = bias_high;
    }
    return p;
}

}  // namespace fdam
