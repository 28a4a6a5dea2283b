#include <omp.h>

#include "doctest.h"
#include "fdam/attention.hpp"
#include "fdam/fft.hpp"
#include "fdam/linalg.hpp"
#include "fdam/nn.hpp"
#include "fdam/rng.hpp"
#include "fdam/stack.hpp"

using namespace fdam;

// Parallel loops split iterations across threads but never reorder the
// arithmetic inside one iteration, so results must match the serial reference
// bit for bit at any thread count (including oversubscription on one core).

namespace {

template <typename Fn>
auto with_threads(int threads, Fn&& fn) {
    const int before = omp_get_max_threads();
    omp_set_num_threads(threads);
    auto result = fn();
    omp_set_num_threads(before);
    return result;
}

}  // namespace

TEST_CASE("dft2/idft2 are bit-identical across thread counts") {
    Rng rng{Seed{1101}};
    const Tensor x = rng.normal_tensor({24, 24});
    const ComplexTensor serial = with_threads(1, [&] { return dft2(x); });
    const ComplexTensor parallel = with_threads(4, [&] { return dft2(x); });
    CHECK(max_abs_diff(serial, parallel) == 0.0);

    ComplexTensor xc(x.shape());
    for (index_t i = 0; i < x.numel(); ++i) xc[i] = cdouble{x[i], 0.0};
    CHECK(max_abs_diff(serial, reference::dft2(xc)) == 0.0);

    const ComplexTensor back_serial = with_threads(1, [&] { return idft2(serial); });
    const ComplexTensor back_parallel = with_threads(4, [&] { return idft2(serial); });
    CHECK(max_abs_diff(back_serial, back_parallel) == 0.0);
    CHECK(max_abs_diff(back_serial, reference::idft2(serial)) == 0.0);
}

TEST_CASE("matmul is bit-identical across thread counts") {
    Rng rng{Seed{1102}};
    const Tensor a = rng.normal_tensor({33, 17});
    const Tensor b = rng.normal_tensor({17, 29});
    const Tensor serial = with_threads(1, [&] { return matmul(a, b); });
    const Tensor parallel = with_threads(4, [&] { return matmul(a, b); });
    CHECK(max_abs_diff(serial, parallel) == 0.0);
    CHECK(max_abs_diff(serial, reference::matmul(a, b)) == 0.0);
}

TEST_CASE("conv2d is bit-identical across thread counts") {
    Rng rng{Seed{1103}};
    const Tensor x = rng.normal_tensor({6, 11, 9});
    const Tensor kernel = rng.normal_tensor({8, 6, 3, 3});
    const Tensor bias = rng.normal_tensor({8});
    const Tensor serial = with_threads(1, [&] { return conv2d(x, kernel, bias); });
    const Tensor parallel = with_threads(4, [&] { return conv2d(x, kernel, bias); });
    CHECK(max_abs_diff(serial, parallel) == 0.0);
    CHECK(max_abs_diff(serial, reference::conv2d(x, kernel, bias)) == 0.0);
}

TEST_CASE("a full forward pass is bit-identical across thread counts") {
    StackConfig cfg;
    cfg.layers = 2;
    cfg.mode = StackMode::attinv_freqscale;
    cfg.attention.heads = 2;
    cfg.attention.channels = 8;
    cfg.attention.height = 8;
    cfg.attention.width = 8;
    cfg.freq_static_scale = 0.5;
    cfg.seed = Seed{1104};
    const Stack stack = build_stack(cfg);
    Rng rng{Seed{1105}};
    const Tensor x0 = white_noise(8, 8, 8, rng);
    const Tensor serial = with_threads(1, [&] { return run_forward(stack, x0).final_features; });
    const Tensor parallel = with_threads(4, [&] { return run_forward(stack, x0).final_features; });
    CHECK(max_abs_diff(serial, parallel) == 0.0);
}
