#pragma once

#include <string>
#include <vector>

#include "fdam/tensor.hpp"

namespace fdam {

// Chebyshev radius of the bin at natural (unshifted) frequency (u,v) on an
// h x w grid: max(|u'|/(h/2), |v'|/(w/2)) over centered offsets, so 1 is the
// Nyquist corner. Also usable on centered grids via centered=true.
double chebyshev_radius(index_t u, index_t v, index_t h, index_t w, bool centered = false);

struct FilterSpectrum {
    ComplexTensor spectrum;  // dft2 of the filter, natural layout
    Tensor magnitude;        // |spectrum|, natural layout
};

FilterSpectrum filter_spectrum(const Tensor& filter);

// Equal-width Chebyshev-radius bands over [0,1]; bands that catch no bins on
// a given grid are marked empty (bin_count 0) and skipped by reports.
struct RadialProfile {
    std::vector<double> band_edges;      // bands+1 entries, 0 .. 1
    std::vector<double> mean_magnitude;  // per band, mean over filters of per-filter band means
    std::vector<double> std_magnitude;   // per band, std across filters
    std::vector<index_t> bin_count;      // bins per band on this grid
};

// Bins centered-layout magnitude grids by Chebyshev radius. Mean is over
// filters of each filter's band mean; std is the population std across
// filters of those band means.
RadialProfile radial_profile(const std::vector<Tensor>& centered_magnitudes, index_t bands);

// Fraction of total spectral energy (summed over channels) at radius >=
// cutoff. x is [C x H x W] or [H x W]. Errors on zero-energy input.
double high_freq_ratio(const Tensor& x, double cutoff = 0.5);

// exp(Shannon entropy of the normalized singular value distribution).
double effective_rank(const Tensor& m);

// Mean cosine similarity over all unordered row pairs of [N x D] tokens.
double patch_cosine_similarity(const Tensor& tokens);

// Elementwise product of per-layer frequency responses.
ComplexTensor composed_response(const std::vector<ComplexTensor>& layer_responses);

struct LayerDiagnostics {
    index_t layer_index = 0;
    double high_freq_ratio = 0.0;
    double effective_rank = 0.0;
    double mean_patch_cosine = 0.0;
    RadialProfile profile;
};

// CSV with header: layer,high_freq_ratio,effective_rank,mean_patch_cosine,
// band_0_mean,...,band_{k-1}_mean,band_0_std,...,band_{k-1}_std.
// Empty bands render as empty cells.
std::string diagnostics_csv_header(index_t bands);
std::string diagnostics_csv(const std::vector<LayerDiagnostics>& rows);

// Per-channel centered magnitude spectra of features [C x H x W].
std::vector<Tensor> channel_magnitudes(const Tensor& x);

}  // namespace fdam
