#pragma once

#include "fdam/attention.hpp"
#include "fdam/rng.hpp"
#include "fdam/tensor.hpp"

namespace fdam {

// Spatial low/high combination weights, one pair of grids per head, each
// entry in (0,1) (they come out of a sigmoid).
struct CombinationField {
    Tensor low;   // [heads x H x W]
    Tensor high;  // [heads x H x W]
};

// Conv predictor for the combination field: C input channels -> 2*heads
// output channels (first heads = low weights, last heads = high weights).
struct AttInvParams {
    Tensor kernel;  // [2*heads x C x k x k], k odd
    Tensor bias;    // [2*heads]
};

// Complement of attention in operator form: inverted = I - A per head, i.e.
// per query filter e_{p,q} - A_{p,q}. Rows sum to 0; spectra satisfy
// F(A) + F(inverted) = F(identity impulse), magnitude 1 at every frequency.
Tensor invert_attention(const AttentionMaps& maps);

CombinationField predict_combination(const Tensor& x, const AttInvParams& params);

// Row p*W+q of head h becomes low[h,p,q] * A-row + high[h,p,q] * inverted-row.
Tensor attinv_combine(const AttentionMaps& maps, const Tensor& inverted,
                      const CombinationField& field);

// Kernel ~ N(0, 1/sqrt(C*k*k)); bias fixed to (bias_low, bias_high) logits for
// the low/high channel halves.
AttInvParams random_attinv_params(const AttentionConfig& cfg, index_t kernel_size,
                                  double bias_low, double bias_high, Rng& rng);

}  // namespace fdam
