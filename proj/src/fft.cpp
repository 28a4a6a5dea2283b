#include "fdam/fft.hpp"

#include <cmath>

namespace fdam {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// exp(sign * 2*pi*i * k / n) for k in [0, n); indexing by (u*y) % n keeps the
// per-bin arithmetic identical between the serial and parallel paths.
std::vector<cdouble> unit_roots(index_t n, int sign) {
    std::vector<cdouble> roots(static_cast<std::size_t>(n));
    for (index_t k = 0; k < n; ++k) {
        double angle = sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        roots[static_cast<std::size_t>(k)] = cdouble{std::cos(angle), std::sin(angle)};
    }
    return roots;
}

// Separable row-column DFT, O(H*W*(H+W)). The `parallel` flag toggles OpenMP;
// each output element is a fixed-order serial reduction either way, so the
// two paths are bit-identical.
ComplexTensor transform2(const ComplexTensor& x, int sign, double norm, bool parallel) {
    require(x.rank() == 2, "dft2/idft2: expected a rank-2 tensor");
    const index_t h = x.dim(0);
    const index_t w = x.dim(1);
    require(h >= 1 && w >= 1, "dft2/idft2: extents must be >= 1");

    const std::vector<cdouble> row_roots = unit_roots(w, sign);
    const std::vector<cdouble> col_roots = unit_roots(h, sign);

    // Stage 1: transform along rows. stage1(y, v) = sum_x x(y, xx) * w^(v*xx)
    ComplexTensor stage1({h, w});
#pragma omp parallel for if (parallel)
    for (index_t y = 0; y < h; ++y) {
        for (index_t v = 0; v < w; ++v) {
            cdouble acc{0.0, 0.0};
            for (index_t xx = 0; xx < w; ++xx) {
                acc += x(y, xx) * row_roots[static_cast<std::size_t>((v * xx) % w)];
            }
            stage1(y, v) = acc;
        }
    }

    // Stage 2: transform along columns. out(u, v) = sum_y stage1(y, v) * w^(u*y)
    ComplexTensor out({h, w});
#pragma omp parallel for collapse(2) if (parallel)
    for (index_t u = 0; u < h; ++u) {
        for (index_t v = 0; v < w; ++v) {
            cdouble acc{0.0, 0.0};
            for (index_t y = 0; y < h; ++y) {
                acc += stage1(y, v) * col_roots[static_cast<std::size_t>((u * y) % h)];
            }
            out(u, v) = norm == 1.0 ? acc : acc * norm;
        }
    }
    return out;
}

template <typename T>
T cyclic_shift2(const T& m, index_t shift_rows, index_t shift_cols) {
    require(m.rank() == 2, "fftshift2: expected a rank-2 tensor");
    const index_t h = m.dim(0);
    const index_t w = m.dim(1);
    T out(m.shape());
    for (index_t i = 0; i < h; ++i) {
        for (index_t j = 0; j < w; ++j) {
            out((i + shift_rows) % h, (j + shift_cols) % w) = m(i, j);
        }
    }
    return out;
}

ComplexTensor to_complex(const Tensor& x) {
    std::vector<cdouble> data(static_cast<std::size_t>(x.numel()));
    for (index_t i = 0; i < x.numel(); ++i) data[static_cast<std::size_t>(i)] = cdouble{x[i], 0.0};
    return ComplexTensor(x.shape(), std::move(data));
}

}  // namespace

ComplexTensor dft2(const Tensor& x) {
    return transform2(to_complex(x), -1, 1.0, true);
}

ComplexTensor dft2(const ComplexTensor& x) {
    return transform2(x, -1, 1.0, true);
}

ComplexTensor idft2(const ComplexTensor& f) {
    require(f.rank() == 2, "idft2: expected a rank-2 tensor");
    const double norm = 1.0 / static_cast<double>(f.dim(0) * f.dim(1));
    return transform2(f, +1, norm, true);
}

ComplexTensor fftshift2(const ComplexTensor& f) {
    return cyclic_shift2(f, f.dim(0) / 2, f.dim(1) / 2);
}

ComplexTensor ifftshift2(const ComplexTensor& f) {
    const index_t h = f.dim(0), w = f.dim(1);
    return cyclic_shift2(f, (h - h / 2) % h, (w - w / 2) % w);
}

Tensor fftshift2(const Tensor& m) {
    return cyclic_shift2(m, m.dim(0) / 2, m.dim(1) / 2);
}

Tensor ifftshift2(const Tensor& m) {
    const index_t h = m.dim(0), w = m.dim(1);
    return cyclic_shift2(m, (h - h / 2) % h, (w - w / 2) % w);
}

bool hermitian_symmetric(const ComplexTensor& f, double tol) {
    require(f.rank() == 2, "hermitian_symmetric: expected a rank-2 tensor");
    const index_t h = f.dim(0);
    const index_t w = f.dim(1);
    for (index_t u = 0; u < h; ++u) {
        for (index_t v = 0; v < w; ++v) {
            cdouble mirrored = std::conj(f((h - u) % h, (w - v) % w));
            if (std::abs(f(u, v) - mirrored) > tol) return false;
        }
    }
    return true;
}

namespace reference {

ComplexTensor dft2(const ComplexTensor& x) {
    return transform2(x, -1, 1.0, false);
}

ComplexTensor idft2(const ComplexTensor& f) {
    require(f.rank() == 2, "idft2: expected a rank-2 tensor");
    const double norm = 1.0 / static_cast<double>(f.dim(0) * f.dim(1));
    return transform2(f, +1, norm, false);
}

}  // namespace reference

}  // namespace fdam
