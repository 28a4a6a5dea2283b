#include "fdam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdam {

namespace {

Tensor matmul_impl(const Tensor& a, const Tensor& b, bool parallel) {
    require(a.rank() == 2 && b.rank() == 2, "matmul: expected rank-2 tensors");
    require(a.dim(1) == b.dim(0), "matmul: inner dimensions disagree");
    const index_t r = a.dim(0), k = a.dim(1), c = b.dim(1);
    Tensor out({r, c});
#pragma omp parallel for if (parallel)
    for (index_t i = 0; i < r; ++i) {
        for (index_t t = 0; t < k; ++t) {
            const double av = a(i, t);
            for (index_t j = 0; j < c; ++j) {
                out(i, j) += av * b(t, j);
            }
        }
    }
    return out;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) { return matmul_impl(a, b, true); }

namespace reference {
Tensor matmul(const Tensor& a, const Tensor& b) { return matmul_impl(a, b, false); }
}  // namespace reference

Tensor transpose(const Tensor& m) {
    require(m.rank() == 2, "transpose: expected a rank-2 tensor");
    Tensor out({m.dim(1), m.dim(0)});
    for (index_t i = 0; i < m.dim(0); ++i) {
        for (index_t j = 0; j < m.dim(1); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

Tensor softmax_rows(const Tensor& m) {
    require(m.rank() == 2, "softmax_rows: expected a rank-2 tensor");
    require(m.all_finite(), "softmax_rows: input must be finite");
    const index_t r = m.dim(0), c = m.dim(1);
    Tensor out({r, c});
    for (index_t i = 0; i < r; ++i) {
        double mx = m(i, 0);
        for (index_t j = 1; j < c; ++j) mx = std::max(mx, m(i, j));
        double sum = 0.0;
        for (index_t j = 0; j < c; ++j) {
            const double e = std::exp(m(i, j) - mx);
            out(i, j) = e;
            sum += e;
        }
        for (index_t j = 0; j < c; ++j) out(i, j) /= sum;
    }
    return out;
}

std::vector<double> singular_values(const Tensor& m) {
    require(m.rank() == 2, "singular_values: expected a rank-2 tensor");
    require(m.dim(0) >= 1 && m.dim(1) >= 1, "singular_values: extents must be >= 1");
    require(m.all_finite(), "singular_values: input must be finite");

    // Work on a tall copy so the one-sided sweeps orthogonalize the smaller
    // column set; singular values are transpose-invariant.
    Tensor g = m.dim(0) >= m.dim(1) ? m : transpose(m);
    const index_t rows = g.dim(0), cols = g.dim(1);

    constexpr int kMaxSweeps = 100;
    constexpr double kTol = 1e-12;

    // Columns whose norm is negligible against the whole matrix carry zero
    // singular values; rotating them would chase rounding noise forever.
    double frob2 = 0.0;
    for (index_t i = 0; i < g.numel(); ++i) frob2 += g[i] * g[i];
    const double dead2 = frob2 * 1e-30;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (index_t p = 0; p + 1 < cols; ++p) {
            for (index_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (index_t i = 0; i < rows; ++i) {
                    alpha += g(i, p) * g(i, p);
                    beta += g(i, q) * g(i, q);
                    gamma += g(i, p) * g(i, q);
                }
                if (alpha <= dead2 || beta <= dead2) continue;
                if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (index_t i = 0; i < rows; ++i) {
                    const double gp = g(i, p), gq = g(i, q);
                    g(i, p) = cs * gp - sn * gq;
                    g(i, q) = sn * gp + cs * gq;
                }
            }
        }
        if (!rotated) {
            std::vector<double> sv(static_cast<std::size_t>(cols));
            for (index_t j = 0; j < cols; ++j) {
                double s = 0.0;
                for (index_t i = 0; i < rows; ++i) s += g(i, j) * g(i, j);
                sv[static_cast<std::size_t>(j)] = std::sqrt(s);
            }
            std::sort(sv.begin(), sv.end(), std::greater<double>());
            return sv;
        }
    }
    throw std::runtime_error("singular_values: Jacobi sweep limit (100) exceeded");
}

}  // namespace fdam
