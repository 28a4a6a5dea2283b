#pragma once

#include <vector>

#include "fdam/nn.hpp"
#include "fdam/rng.hpp"
#include "fdam/tensor.hpp"

namespace fdam {

// Band-wise frequency scaling: n static basis weights W_i over a coarse b x b
// band grid, mixed per channel group by dynamic coefficients D from a pooled
// MLP, then applied multiplicatively to the centered feature spectrum.
struct FreqScaleParams {
    std::vector<Tensor> static_weights;  // n tensors, each [(C/g) x b x b]
    std::vector<MlpLayer> mlp;           // C -> C/4 -> g*n, tanh activations
    index_t groups = 4;
    index_t bases = 4;
    index_t band = 4;  // b
};

// Nearest-neighbor upsample of a [b x b] grid to [H x W]; source index is
// floor(i * b / H).
Tensor upsample_nearest(const Tensor& grid, index_t height, index_t width);

// Global-average-pool x -> MLP -> D in (-1,1)^{g x n}; group j's channel
// block of the result is 1 + sum_i D[j,i] * W_i. Shape [C x b x b]. With
// all-zero static weights this is identically 1 (identity scaling).
Tensor freqscale_weights(const Tensor& x, const FreqScaleParams& params);

// Per channel: dft2 -> center -> multiply by the upsampled, evenly
// symmetrized weight grid -> uncenter -> idft2 -> real part. Symmetrization
// (w(u,v) = w(-u,-v) about the centered DC bin) keeps the output real; the
// discarded imaginary residue (max abs) is reported via max_imag when given.
Tensor freqscale_apply(const Tensor& x, const Tensor& weights, double* max_imag = nullptr);

// Static weights ~ N(0, static_scale) (identically zero when static_scale is
// 0, making the whole module the identity); MLP weights ~ N(0, 1/sqrt(fan_in)),
// biases zero.
FreqScaleParams random_freqscale_params(index_t channels, index_t groups, index_t bases,
                                        index_t band, double static_scale, Rng& rng);

}  // namespace fdam
