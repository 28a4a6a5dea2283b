// Wall-clock comparison of the OpenMP kernels against their serial reference
// twins, plus a bit-identity check (the two paths must agree exactly).

#include <chrono>
#include <cstdio>
#include <functional>

#include "fdam/fft.hpp"
#include "fdam/linalg.hpp"
#include "fdam/nn.hpp"
#include "fdam/rng.hpp"

namespace {

using fdam::Tensor;

double time_ms(int reps, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, double max_diff) {
    std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   max|diff| %g\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, max_diff);
}

}  // namespace

int main() {
    fdam::Rng rng{fdam::Seed{42}};

    {
        const Tensor grid = rng.normal_tensor({64, 64});
        fdam::ComplexTensor cgrid({64, 64});
        for (fdam::index_t i = 0; i < grid.numel(); ++i) cgrid[i] = {grid[i], 0.0};
        fdam::ComplexTensor out_p, out_s;
        const double parallel_ms = time_ms(20, [&] { out_p = fdam::dft2(cgrid); });
        const double serial_ms = time_ms(20, [&] { out_s = fdam::reference::dft2(cgrid); });
        report("dft2 64x64", serial_ms, parallel_ms, fdam::max_abs_diff(out_p, out_s));

        fdam::ComplexTensor inv_p, inv_s;
        const double ip = time_ms(20, [&] { inv_p = fdam::idft2(out_p); });
        const double is = time_ms(20, [&] { inv_s = fdam::reference::idft2(out_p); });
        report("idft2 64x64", is, ip, fdam::max_abs_diff(inv_p, inv_s));
    }

    {
        const Tensor a = rng.normal_tensor({192, 192});
        const Tensor b = rng.normal_tensor({192, 192});
        Tensor out_p, out_s;
        const double parallel_ms = time_ms(20, [&] { out_p = fdam::matmul(a, b); });
        const double serial_ms = time_ms(20, [&] { out_s = fdam::reference::matmul(a, b); });
        report("matmul 192x192", serial_ms, parallel_ms, fdam::max_abs_diff(out_p, out_s));
    }

    {
        const Tensor x = rng.normal_tensor({32, 32, 32});
        const Tensor kernel = rng.normal_tensor({32, 32, 3, 3});
        const Tensor bias = rng.normal_tensor({32});
        Tensor out_p, out_s;
        const double parallel_ms = time_ms(5, [&] { out_p = fdam::conv2d(x, kernel, bias); });
        const double serial_ms =
            time_ms(5, [&] { out_s = fdam::reference::conv2d(x, kernel, bias); });
        report("conv2d 32ch 32x32 k3", serial_ms, parallel_ms, fdam::max_abs_diff(out_p, out_s));
    }

    return 0;
}
