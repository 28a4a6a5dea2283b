#include "fdam/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fdam/fft.hpp"
#include "fdam/linalg.hpp"
#include "fdam/tensor_io.hpp"

namespace fdam {

double chebyshev_radius(index_t u, index_t v, index_t h, index_t w, bool centered) {
    const index_t ch = h / 2, cw = w / 2;
    // Signed offset from DC: for natural layout DC sits at (0,0) and the
    // offset wraps; for centered layout DC sits at (ch, cw).
    const index_t du = centered ? u - ch : ((u + ch) % h) - ch;
    const index_t dv = centered ? v - cw : ((v + cw) % w) - cw;
    const double ru = std::abs(static_cast<double>(du)) / (static_cast<double>(h) / 2.0);
    const double rv = std::abs(static_cast<double>(dv)) / (static_cast<double>(w) / 2.0);
    return std::max(ru, rv);
}

FilterSpectrum filter_spectrum(const Tensor& filter) {
    require(filter.rank() == 2, "filter_spectrum: expected [H x W]");
    FilterSpectrum out;
    out.spectrum = dft2(filter);
    out.magnitude = Tensor(filter.shape());
    for (index_t i = 0; i < out.spectrum.numel(); ++i)
        out.magnitude[i] = std::abs(out.spectrum[i]);
    return out;
}

RadialProfile radial_profile(const std::vector<Tensor>& centered_magnitudes, index_t bands) {
    require(bands >= 2, "radial_profile: need at least 2 bands");
    require(!centered_magnitudes.empty(), "radial_profile: need at least one magnitude grid");
    const Tensor& first = centered_magnitudes.front();
    require(first.rank() == 2, "radial_profile: magnitude grids must be rank-2");
    for (const Tensor& m : centered_magnitudes)
        require(m.same_shape(first), "radial_profile: magnitude grids must share a shape");

    const index_t h = first.dim(0), w = first.dim(1);
    RadialProfile out;
    for (index_t b = 0; b <= bands; ++b)
        out.band_edges.push_back(static_cast<double>(b) / static_cast<double>(bands));

    // Band of each bin: equal-width shells [k/bands, (k+1)/bands), last band
    // closed at 1.
    std::vector<index_t> band_of(static_cast<std::size_t>(h * w));
    out.bin_count.assign(static_cast<std::size_t>(bands), 0);
    for (index_t i = 0; i < h; ++i)
        for (index_t j = 0; j < w; ++j) {
            const double rho = chebyshev_radius(i, j, h, w, /*centered=*/true);
            index_t b = static_cast<index_t>(rho * static_cast<double>(bands));
            b = std::min(b, bands - 1);
            band_of[static_cast<std::size_t>(i * w + j)] = b;
            ++out.bin_count[static_cast<std::size_t>(b)];
        }

    const index_t filters = static_cast<index_t>(centered_magnitudes.size());
    // per-filter band means
    std::vector<std::vector<double>> fm(static_cast<std::size_t>(filters),
                                        std::vector<double>(static_cast<std::size_t>(bands), 0.0));
    for (index_t f = 0; f < filters; ++f) {
        const Tensor& m = centered_magnitudes[static_cast<std::size_t>(f)];
        auto& row = fm[static_cast<std::size_t>(f)];
        for (index_t i = 0; i < h * w; ++i) row[static_cast<std::size_t>(band_of[static_cast<std::size_t>(i)])] += m[i];
        for (index_t b = 0; b < bands; ++b)
            if (out.bin_count[static_cast<std::size_t>(b)] > 0)
                row[static_cast<std::size_t>(b)] /= static_cast<double>(out.bin_count[static_cast<std::size_t>(b)]);
    }

    out.mean_magnitude.assign(static_cast<std::size_t>(bands), 0.0);
    out.std_magnitude.assign(static_cast<std::size_t>(bands), 0.0);
    for (index_t b = 0; b < bands; ++b) {
        if (out.bin_count[static_cast<std::size_t>(b)] == 0) continue;
        double mean = 0.0;
        for (index_t f = 0; f < filters; ++f) mean += fm[static_cast<std::size_t>(f)][static_cast<std::size_t>(b)];
        mean /= static_cast<double>(filters);
        double var = 0.0;
        for (index_t f = 0; f < filters; ++f) {
            const double d = fm[static_cast<std::size_t>(f)][static_cast<std::size_t>(b)] - mean;
            var += d * d;
        }
        out.mean_magnitude[static_cast<std::size_t>(b)] = mean;
        out.std_magnitude[static_cast<std::size_t>(b)] = std::sqrt(var / static_cast<double>(filters));
    }
    return out;
}

double high_freq_ratio(const Tensor& x, double cutoff) {
    require(cutoff > 0.0 && cutoff < 1.0, "high_freq_ratio: cutoff must be in (0,1)");
    require(x.rank() == 2 || x.rank() == 3, "high_freq_ratio: expected [C x H x W] or [H x W]");
    const index_t channels = x.rank() == 3 ? x.dim(0) : 1;
    const index_t h = x.rank() == 3 ? x.dim(1) : x.dim(0);
    const index_t w = x.rank() == 3 ? x.dim(2) : x.dim(1);

    double total = 0.0, high = 0.0;
    for (index_t ch = 0; ch < channels; ++ch) {
        Tensor channel({h, w});
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) channel(i, j) = x.rank() == 3 ? x(ch, i, j) : x(i, j);
        const ComplexTensor f = dft2(channel);
        for (index_t u = 0; u < h; ++u)
            for (index_t v = 0; v < w; ++v) {
                const double e = std::norm(f(u, v));
                total += e;
                if (chebyshev_radius(u, v, h, w) >= cutoff) high += e;
            }
    }
    require(total > 0.0, "high_freq_ratio: zero-energy input");
    return high / total;
}

double effective_rank(const Tensor& m) {
    const std::vector<double> sv = singular_values(m);
    double sum = 0.0;
    for (double s : sv) sum += s;
    require(sum > 0.0, "effective_rank: all-zero matrix");
    double entropy = 0.0;
    for (double s : sv) {
        if (s <= 0.0) continue;  // 0*ln(0) := 0
        const double p = s / sum;
        entropy -= p * std::log(p);
    }
    return std::exp(entropy);
}

double patch_cosine_similarity(const Tensor& tokens) {
    require(tokens.rank() == 2, "patch_cosine_similarity: expected [N x D]");
    const index_t n = tokens.dim(0), d = tokens.dim(1);
    require(n >= 2, "patch_cosine_similarity: need at least 2 rows");
    std::vector<double> norms(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (index_t j = 0; j < d; ++j) s += tokens(i, j) * tokens(i, j);
        require(s > 0.0, "patch_cosine_similarity: zero row");
        norms[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (index_t k = 0; k < d; ++k) dot += tokens(i, k) * tokens(j, k);
            acc += dot / (norms[static_cast<std::size_t>(i)] * norms[static_cast<std::size_t>(j)]);
        }
    return acc / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

ComplexTensor composed_response(const std::vector<ComplexTensor>& layer_responses) {
    require(!layer_responses.empty(), "composed_response: need at least one response");
    ComplexTensor out = layer_responses.front();
    for (std::size_t i = 1; i < layer_responses.size(); ++i) {
        const ComplexTensor& r = layer_responses[i];
        require(r.same_shape(out), "composed_response: response shapes disagree");
        for (index_t k = 0; k < out.numel(); ++k) out[k] *= r[k];
    }
    return out;
}

std::string diagnostics_csv_header(index_t bands) {
    std::string out = "layer,high_freq_ratio,effective_rank,mean_patch_cosine";
    for (index_t b = 0; b < bands; ++b) out += ",band_" + std::to_string(b) + "_mean";
    for (index_t b = 0; b < bands; ++b) out += ",band_" + std::to_string(b) + "_std";
    out.push_back('\n');
    return out;
}

std::string diagnostics_csv(const std::vector<LayerDiagnostics>& rows) {
    require(!rows.empty(), "diagnostics_csv: no rows");
    const index_t bands = static_cast<index_t>(rows.front().profile.mean_magnitude.size());
    std::string out = diagnostics_csv_header(bands);
    for (const LayerDiagnostics& r : rows) {
        require(static_cast<index_t>(r.profile.mean_magnitude.size()) == bands,
                "diagnostics_csv: rows disagree on band count");
        out += std::to_string(r.layer_index);
        out.push_back(',');
        out += format_double(r.high_freq_ratio);
        out.push_back(',');
        out += format_double(r.effective_rank);
        out.push_back(',');
        out += format_double(r.mean_patch_cosine);
        for (index_t b = 0; b < bands; ++b) {
            out.push_back(',');
            if (r.profile.bin_count[static_cast<std::size_t>(b)] > 0)
                out += format_double(r.profile.mean_magnitude[static_cast<std::size_t>(b)]);
        }
        for (index_t b = 0; b < bands; ++b) {
            out.push_back(',');
            if (r.profile.bin_count[static_cast<std::size_t>(b)] > 0)
                out += format_double(r.profile.std_magnitude[static_cast<std::size_t>(b)]);
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<Tensor> channel_magnitudes(const Tensor& x) {
    require(x.rank() == 3, "channel_magnitudes: expected [C x H x W]");
    const index_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
    std::vector<Tensor> out;
    out.reserve(static_cast<std::size_t>(c));
    for (index_t ch = 0; ch < c; ++ch) {
        Tensor channel({h, w});
        for (index_t i = 0; i < h; ++i)
            for (index_t j = 0; j < w; ++j) channel(i, j) = x(ch, i, j);
        const ComplexTensor f = fftshift2(dft2(channel));
        Tensor mag({h, w});
        for (index_t i = 0; i < mag.numel(); ++i) mag[i] = std::abs(f[i]);
        out.push_back(std::move(mag));
    }
    return out;
}

}  // namespace fdam
