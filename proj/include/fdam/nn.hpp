#pragma once

#include <vector>

#include "fdam/tensor.hpp"

namespace fdam {

// 2D cross-correlation with zero padding of (k-1)/2, so spatial extents are
// preserved. x is [C_in x H x W], kernel [C_out x C_in x k x k] with odd k,
// bias [C_out]; result is [C_out x H x W].
Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias);

enum class Activation { identity, tanh };

struct MlpLayer {
    Tensor weight;  // [D_out x D_in]
    Tensor bias;    // [D_out]
    Activation activation = Activation::identity;
};

// Sequential affine + activation over a rank-1 input.
Tensor mlp_forward(const Tensor& x, const std::vector<MlpLayer>& layers);

double sigmoid(double x);
Tensor sigmoid(const Tensor& x);

namespace reference {
// Serial twin of conv2d (the public one may use OpenMP).
Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias);
}  // namespace reference

}  // namespace fdam
