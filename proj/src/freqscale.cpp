#include "fdam/freqscale.hpp"

#include <algorithm>
#include <cmath>

#include "fdam/fft.hpp"

namespace fdam {

Tensor upsample_nearest(const Tensor& grid, index_t height, index_t width) {
    require(grid.rank() == 2, "upsample_nearest: expected [b x b]");
    const index_t bh = grid.dim(0), bw = grid.dim(1);
    require(bh <= height && bw <= width, "upsample_nearest: band grid larger than target");
    Tensor out({height, width});
    for (index_t i = 0; i < height; ++i) {
        const index_t si = i * bh / height;
        for (index_t j = 0; j < width; ++j) {
            out(i, j) = grid(si, j * bw / width);
        }
    }
    return out;
}

Tensor freqscale_weights(const Tensor& x, const FreqScaleParams& params) {
    require(x.rank() == 3, "freqscale_weights: input must be [C x H x W]");
    const index_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
    const index_t g = params.groups, n = params.bases, b = params.band;
    require(g >= 1 && c % g == 0, "freqscale_weights: channels must be divisible by groups");
    require(static_cast<index_t>(params.static_weights.size()) == n,
            "freqscale_weights: expected n static weight tensors");
    const index_t cg = c / g;
    for (const Tensor& wi : params.static_weights) {
        require(wi.rank() == 3 && wi.dim(0) == cg && wi.dim(1) == b && wi.dim(2) == b,
                "freqscale_weights: static weight must be [(C/g) x b x b]");
    }

    // Global average pool over spatial dims.
    Tensor pooled({c});
    const double inv_hw = 1.0 / static_cast<double>(h * w);
    for (index_t ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) acc += x(ch, i, j);
        pooled(ch) = acc * inv_hw;
    }

    const Tensor d = mlp_forward(pooled, params.mlp);
    require(d.dim(0) == g * n, "freqscale_weights: MLP output must have g*n entries");

    Tensor out = Tensor::full({c, b, b}, 1.0);
    for (index_t j = 0; j < g; ++j) {
        for (index_t i = 0; i < n; ++i) {
            const double coef = d(j * n + i);
            const Tensor& wi = params.static_weights[static_cast<std::size_t>(i)];
            for (index_t ch = 0; ch < cg; ++ch)
                for (index_t u = 0; u < b; ++u)
                    for (index_t v = 0; v < b; ++v) out(j * cg + ch, u, v) += coef * wi(ch, u, v);
        }
    }
    return out;
}

Tensor freqscale_apply(const Tensor& x, const Tensor& weights, double* max_imag) {
    require(x.rank() == 3, "freqscale_apply: input must be [C x H x W]");
    require(weights.rank() == 3 && weights.dim(0) == x.dim(0),
            "freqscale_apply: weights must be [C x b x b]");
    const index_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
    require(weights.dim(1) <= h && weights.dim(2) <= w,
            "freqscale_apply: band grid larger than feature grid");

    Tensor out({c, h, w});
    double residue = 0.0;
    for (index_t ch = 0; ch < c; ++ch) {
        Tensor channel({h, w});
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) channel(i, j) = x(ch, i, j);

        Tensor band({weights.dim(1), weights.dim(2)});
        for (index_t u = 0; u < band.dim(0); ++u)
            for (index_t v = 0; v < band.dim(1); ++v) band(u, v) = weights(ch, u, v);
        Tensor full = upsample_nearest(band, h, w);

        // Even symmetry about the centered DC bin (index floor(dim/2)) so the
        // modulated spectrum stays Hermitian and the inverse transform real.
        Tensor sym({h, w});
        for (index_t i = 0; i < h; ++i) {
            const index_t pi = (2 * (h / 2) - i + h) % h;
            for (index_t j = 0; j < w; ++j) {
                const index_t pj = (2 * (w / 2) - j + w) % w;
                sym(i, j) = 0.5 * (full(i, j) + full(pi, pj));
            }
        }

        ComplexTensor spectrum = fftshift2(dft2(channel));
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) spectrum(i, j) *= sym(i, j);
        const ComplexTensor back = idft2(ifftshift2(spectrum));

        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) {
                residue = std::max(residue, std::abs(back(i, j).imag()));
                out(ch, i, j) = back(i, j).real();
            }
    }
    if (max_imag) *max_imag = residue;
    return out;
}

FreqScaleParams random_freqscale_params(index_t channels, index_t groups, index_t bases,
                                        index_t band, double static_scale, Rng& rng) {
    require(channels >= 1 && groups >= 1 && channels % groups == 0,
            "random_freqscale_params: channels must be divisible by groups");
    require(bases >= 1 && band >= 1, "random_freqscale_params: bases and band must be >= 1");
    require(channels >= 4, "random_freqscale_params: MLP hidden dim C/4 needs channels >= 4");
    FreqScaleParams p;
    p.groups = groups;
    p.bases = bases;
    p.band = band;
    const index_t cg = channels / groups;
    for (index_t i = 0; i < bases; ++i) {
        p.static_weights.push_back(static_scale == 0.0
                                       ? Tensor({cg, band, band})
                                       : rng.normal_tensor({cg, band, band}, static_scale));
    }
    const index_t hidden = channels / 4;
    MlpLayer l1{rng.normal_tensor({hidden, channels}, 1.0 / std::sqrt(static_cast<double>(channels))),
                Tensor({hidden}), Activation::tanh};
    MlpLayer l2{rng.normal_tensor({groups * bases, hidden},
                                  1.0 / std::sqrt(static_cast<double>(hidden))),
                Tensor({groups * bases}), Activation::tanh};
    p.mlp = {std::move(l1), std::move(l2)};
    return p;
}

}  // namespace fdam
