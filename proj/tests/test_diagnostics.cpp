#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fdam/diagnostics.hpp"
#include "fdam/fft.hpp"
#include "fdam/rng.hpp"

using namespace fdam;

TEST_CASE("chebyshev_radius in natural and centered layouts") {
    // natural: DC at (0,0), frequencies wrap
    CHECK(chebyshev_radius(0, 0, 8, 8) == 0.0);
    CHECK(chebyshev_radius(1, 0, 8, 8) == 0.25);
    CHECK(chebyshev_radius(7, 0, 8, 8) == 0.25);  // 7 = -1 mod 8
    CHECK(chebyshev_radius(0, 2, 8, 8) == 0.5);
    CHECK(chebyshev_radius(4, 4, 8, 8) == 1.0);   // Nyquist corner
    // centered: DC at (h/2, w/2)
    CHECK(chebyshev_radius(4, 4, 8, 8, true) == 0.0);
    CHECK(chebyshev_radius(0, 0, 8, 8, true) == 1.0);
    CHECK(chebyshev_radius(4, 6, 8, 8, true) == 0.5);
    // odd extents: half-width is h/2.0 = 2.5
    CHECK(chebyshev_radius(1, 0, 5, 5) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(chebyshev_radius(3, 0, 5, 5) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(chebyshev_radius(2, 0, 5, 5) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("filter_spectrum of uniform and one-hot filters") {
    const index_t h = 4, w = 4;
    const FilterSpectrum uni = filter_spectrum(Tensor::full({h, w}, 1.0 / (h * w)));
    CHECK(uni.magnitude(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (index_t u = 0; u < h; ++u)
        for (index_t v = 0; v < w; ++v)
            if (u != 0 || v != 0) CHECK(uni.magnitude(u, v) < 1e-12);

    Tensor onehot({h, w});
    onehot(1, 2) = 1.0;
    const FilterSpectrum hot = filter_spectrum(onehot);
    for (index_t i = 0; i < hot.magnitude.numel(); ++i)
        CHECK(hot.magnitude[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hot.spectrum.shape() == std::vector<index_t>{h, w});
}

TEST_CASE("radial_profile of a flat magnitude grid") {
    const RadialProfile p = radial_profile({Tensor::full({8, 8}, 1.0)}, 4);
    REQUIRE(p.band_edges.size() == 5);
    CHECK(p.band_edges.front() == 0.0);
    CHECK(p.band_edges.back() == 1.0);
    REQUIRE(p.bin_count.size() == 4);
    // rho on 8x8 takes values {0, .25, .5, .75, 1} with counts {1, 8, 16, 24, 15}
    CHECK(p.bin_count[0] == 1);
    CHECK(p.bin_count[1] == 8);
    CHECK(p.bin_count[2] == 16);
    CHECK(p.bin_count[3] == 39);
    index_t total = 0;
    for (index_t c : p.bin_count) total += c;
    CHECK(total == 64);
    for (std::size_t b = 0; b < 4; ++b) {
        CHECK(p.mean_magnitude[b] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.std_magnitude[b] == 0.0);
    }
}

TEST_CASE("radial_profile marks shells that catch no bins as empty") {
    const RadialProfile p = radial_profile({Tensor::full({8, 8}, 1.0)}, 8);
    // On an 8x8 grid rho*8 is always even, so odd shells are empty.
    CHECK(p.bin_count[0] == 1);
    CHECK(p.bin_count[1] == 0);
    CHECK(p.bin_count[2] == 8);
    CHECK(p.bin_count[3] == 0);
    CHECK(p.bin_count[4] == 16);
    CHECK(p.bin_count[5] == 0);
    CHECK(p.bin_count[6] == 24);
    CHECK(p.bin_count[7] == 15);
    for (std::size_t b : {std::size_t{1}, std::size_t{3}, std::size_t{5}}) {
        CHECK(p.mean_magnitude[b] == 0.0);
        CHECK(p.std_magnitude[b] == 0.0);
    }
}

TEST_CASE("radial_profile separates a DC-only grid into band 0") {
    Tensor dc({8, 8});
    dc(4, 4) = 1.0;  // centered DC bin
    const RadialProfile p = radial_profile({dc}, 4);
    CHECK(p.mean_magnitude[0] == 1.0);
    CHECK(p.mean_magnitude[1] == 0.0);
    CHECK(p.mean_magnitude[2] == 0.0);
    CHECK(p.mean_magnitude[3] == 0.0);
}

TEST_CASE("radial_profile std is the population std across filters") {
    const RadialProfile p =
        radial_profile({Tensor::full({8, 8}, 1.0), Tensor::full({8, 8}, 3.0)}, 4);
    for (std::size_t b = 0; b < 4; ++b) {
        CHECK(p.mean_magnitude[b] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(p.std_magnitude[b] == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(radial_profile({}, 4), std::invalid_argument);
    CHECK_THROWS_AS(radial_profile({Tensor::full({4, 4}, 1.0)}, 1), std::invalid_argument);
}

TEST_CASE("high_freq_ratio of a constant is zero up to DFT rounding") {
    CHECK(high_freq_ratio(Tensor::full({8, 8}, 3.0), 0.5) < 1e-30);
    CHECK(high_freq_ratio(Tensor::full({2, 8, 8}, -1.0), 0.5) < 1e-30);
}

TEST_CASE("high_freq_ratio of a checkerboard is one") {
    Tensor x({8, 8});
    for (index_t i = 0; i < 8; ++i)
        for (index_t j = 0; j < 8; ++j) x(i, j) = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    CHECK(high_freq_ratio(x, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("high_freq_ratio of an impulse counts bins beyond the cutoff") {
    Tensor x({8, 8});
    x(0, 0) = 1.0;  // flat spectrum: every bin holds equal energy
    CHECK(high_freq_ratio(x, 0.5) == doctest::Approx(55.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("high_freq_ratio is scale invariant and validates input") {
    Rng rng{Seed{1001}};
    const Tensor x = rng.normal_tensor({3, 8, 8});
    const double r = high_freq_ratio(x, 0.5);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    CHECK(high_freq_ratio(scaled(x, 7.0), 0.5) == doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS_AS(high_freq_ratio(Tensor({8, 8}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(high_freq_ratio(x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(high_freq_ratio(x, 1.0), std::invalid_argument);
}

TEST_CASE("effective_rank of identity, rank-one, and diag(2,1,1)") {
    Tensor eye({4, 4});
    for (index_t i = 0; i < 4; ++i) eye(i, i) = 1.0;
    CHECK(effective_rank(eye) == doctest::Approx(4.0).epsilon(1e-9));

    Tensor rank1({3, 5});
    for (index_t i = 0; i < 3; ++i)
        for (index_t j = 0; j < 5; ++j) rank1(i, j) = (i + 1.0) * (j + 1.0);
    CHECK(effective_rank(rank1) == doctest::Approx(1.0).epsilon(1e-9));

    Tensor diag({3, 3});
    diag(0, 0) = 2.0;
    diag(1, 1) = 1.0;
    diag(2, 2) = 1.0;
    CHECK(effective_rank(diag) == doctest::Approx(2.8284271247461903).epsilon(1e-9));
    CHECK(effective_rank(scaled(diag, 5.0)) == doctest::Approx(2.8284271247461903).epsilon(1e-9));
    CHECK_THROWS_AS(effective_rank(Tensor({3, 3})), std::invalid_argument);
}

TEST_CASE("patch_cosine_similarity on hand-built token sets") {
    CHECK(patch_cosine_similarity(Tensor({2, 3}, {1, 2, 3, 2, 4, 6})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(patch_cosine_similarity(Tensor({2, 2}, {1, 0, 0, 1})) == doctest::Approx(0.0));
    CHECK(patch_cosine_similarity(Tensor({2, 2}, {3, 4, -3, -4})) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    // rows e1, e1, e2: pair similarities 1, 0, 0
    CHECK(patch_cosine_similarity(Tensor({3, 2}, {1, 0, 1, 0, 0, 1})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // row rescaling leaves it unchanged
    Rng rng{Seed{1002}};
    Tensor t = rng.normal_tensor({5, 4});
    const double base = patch_cosine_similarity(t);
    for (index_t j = 0; j < 4; ++j) t(2, j) *= 10.0;
    CHECK(patch_cosine_similarity(t) == doctest::Approx(base).epsilon(1e-12));
    CHECK_THROWS_AS(patch_cosine_similarity(Tensor({1, 4})), std::invalid_argument);
    CHECK_THROWS_AS(patch_cosine_similarity(Tensor({3, 2})), std::invalid_argument);
}

TEST_CASE("composed_response multiplies responses elementwise") {
    ComplexTensor a({2, 2}), b({2, 2});
    a(0, 0) = {1, 0};
    a(0, 1) = {0, 1};
    a(1, 0) = {2, 0};
    a(1, 1) = {1, 1};
    b(0, 0) = {3, 0};
    b(0, 1) = {0, 1};
    b(1, 0) = {0.5, 0};
    b(1, 1) = {1, -1};
    const ComplexTensor c = composed_response({a, b});
    CHECK(c(0, 0) == cdouble{3, 0});
    CHECK(c(0, 1) == cdouble{-1, 0});
    CHECK(c(1, 0) == cdouble{1, 0});
    CHECK(c(1, 1) == cdouble{2, 0});
    CHECK(max_abs_diff(composed_response({a}), a) == 0.0);
    CHECK_THROWS_AS(composed_response({a, ComplexTensor({3, 3})}), std::invalid_argument);
    CHECK_THROWS_AS(composed_response({}), std::invalid_argument);
}

TEST_CASE("diagnostics_csv renders rows and empty bands") {
    LayerDiagnostics row;
    row.layer_index = 3;
    row.high_freq_ratio = 0.25;
    row.effective_rank = 2.0;
    row.mean_patch_cosine = -0.5;
    row.profile.mean_magnitude = {1.5, 0.0};
    row.profile.std_magnitude = {0.25, 0.0};
    row.profile.bin_count = {4, 0};
    const std::string csv = diagnostics_csv({row});
    CHECK(csv ==
          "layer,high_freq_ratio,effective_rank,mean_patch_cosine,"
          "band_0_mean,band_1_mean,band_0_std,band_1_std\n"
          "3,0.25,2,-0.5,1.5,,0.25,\n");
    CHECK(diagnostics_csv_header(2) ==
          "layer,high_freq_ratio,effective_rank,mean_patch_cosine,"
          "band_0_mean,band_1_mean,band_0_std,band_1_std\n");
}

TEST_CASE("channel_magnitudes centers the DC bin") {
    const Tensor x = Tensor::full({2, 6, 8}, 0.5);
    const std::vector<Tensor> mags = channel_magnitudes(x);
    REQUIRE(mags.size() == 2);
    for (const Tensor& m : mags) {
        CHECK(m(3, 4) == doctest::Approx(0.5 * 6 * 8).epsilon(1e-12));
        for (index_t i = 0; i < 6; ++i)
            for (index_t j = 0; j < 8; ++j)
                if (i != 3 || j != 4) CHECK(m(i, j) < 1e-9);
    }
}
