#include "fdam/nn.hpp"

#include <cmath>

namespace fdam {

namespace {

Tensor conv2d_impl(const Tensor& x, const Tensor& kernel, const Tensor& bias, bool parallel) {
    require(x.rank() == 3, "conv2d: input must be [C_in x H x W]");
    require(kernel.rank() == 4, "conv2d: kernel must be [C_out x C_in x k x k]");
    require(bias.rank() == 1, "conv2d: bias must be [C_out]");
    const index_t cin = x.dim(0), h = x.dim(1), w = x.dim(2);
    const index_t cout = kernel.dim(0), k = kernel.dim(2);
    require(kernel.dim(1) == cin, "conv2d: kernel C_in disagrees with input");
    require(kernel.dim(3) == k, "conv2d: kernel must be square");
    require(k % 2 == 1, "conv2d: kernel size must be odd");
    require(bias.dim(0) == cout, "conv2d: bias length disagrees with kernel C_out");

    const index_t pad = (k - 1) / 2;
    Tensor out({cout, h, w});
#pragma omp parallel for if (parallel)
    for (index_t co = 0; co < cout; ++co) {
        for (index_t i = 0; i < h; ++i) {
            for (index_t j = 0; j < w; ++j) {
                double acc = bias(co);
                for (index_t ci = 0; ci < cin; ++ci) {
                    for (index_t di = 0; di < k; ++di) {
                        const index_t si = i + di - pad;
                        if (si < 0 || si >= h) continue;
                        for (index_t dj = 0; dj < k; ++dj) {
                            const index_t sj = j + dj - pad;
                            if (sj < 0 || sj >= w) continue;
                            acc += x(ci, si, sj) * kernel(co, ci, di, dj);
                        }
                    }
                }
                out(co, i, j) = acc;
            }
        }
    }
    return out;
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias) {
    return conv2d_impl(x, kernel, bias, true);
}

namespace reference {
Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias) {
    return conv2d_impl(x, kernel, bias, false);
}
}  // namespace reference

Tensor mlp_forward(const Tensor& x, const std::vector<MlpLayer>& layers) {
    require(x.rank() == 1, "mlp_forward: input must be rank-1");
    Tensor cur = x;
    for (const MlpLayer& layer : layers) {
        require(layer.weight.rank() == 2, "mlp_forward: weight must be rank-2");
        require(layer.bias.rank() == 1, "mlp_forward: bias must be rank-1");
        require(layer.weight.dim(1) == cur.dim(0), "mlp_forward: weight D_in disagrees with input");
        require(layer.weight.dim(0) == layer.bias.dim(0),
                "mlp_forward: bias length disagrees with weight D_out");
        Tensor next({layer.weight.dim(0)});
        for (index_t i = 0; i < next.dim(0); ++i) {
            double acc = layer.bias(i);
            for (index_t j = 0; j < cur.dim(0); ++j) acc += layer.weight(i, j) * cur(j);
            next(i) = layer.activation == Activation::tanh ? std::tanh(acc) : acc;
        }
        cur = std::move(next);
    }
    return cur;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor sigmoid(const Tensor& x) {
    Tensor out(x.shape());
    for (index_t i = 0; i < x.numel(); ++i) out[i] = sigmoid(x[i]);
    return out;
}

}  // namespace fdam
