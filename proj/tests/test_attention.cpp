#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fdam/attention.hpp"
#include "fdam/fft.hpp"
#include "fdam/rng.hpp"
#include "oracles.hpp"

using namespace fdam;

namespace {

AttentionConfig small_cfg() {
    AttentionConfig cfg;
    cfg.heads = 2;
    cfg.channels = 8;
    cfg.height = 4;
    cfg.width = 4;
    return cfg;
}

}  // namespace

TEST_CASE("token/feature layout round trip, token index p*W+q") {
    Rng rng{Seed{701}};
    const Tensor x = rng.normal_tensor({3, 4, 5});
    const Tensor tokens = tokens_from_features(x);
    CHECK(tokens.shape() == std::vector<index_t>{20, 3});
    CHECK(tokens(1 * 5 + 2, 0) == x(0, 1, 2));
    CHECK(tokens(3 * 5 + 4, 2) == x(2, 3, 4));
    CHECK(max_abs_diff(features_from_tokens(tokens, 4, 5), x) == 0.0);
}

TEST_CASE("project_tokens computes tokens * w^T + b") {
    const Tensor tokens({2, 2}, {1, 2, 3, 4});
    const Tensor w({2, 2}, {1, 0, 1, 1});  // rows of w are output features
    const Tensor b({2}, {10, 20});
    const Tensor out = project_tokens(tokens, w, b);
    // token (1,2): [1*1+2*0, 1*1+2*1] + b = [11, 23]
    CHECK(out(0, 0) == 11.0);
    CHECK(out(0, 1) == 23.0);
    CHECK(out(1, 0) == 13.0);
    CHECK(out(1, 1) == 27.0);
}

TEST_CASE("zero input gives uniform attention rows") {
    const AttentionConfig cfg = small_cfg();
    Rng rng{Seed{702}};
    const MhsaParams params = random_mhsa_params(cfg, rng);
    const Tensor x({cfg.channels, cfg.height, cfg.width});
    const AttentionMaps maps = compute_attention(x, params, cfg);
    const double uniform = 1.0 / static_cast<double>(cfg.tokens());
    for (index_t i = 0; i < maps.maps.numel(); ++i)
        CHECK(maps.maps[i] == doctest::Approx(uniform).epsilon(1e-12));
}

TEST_CASE("attention rows are non-negative and sum to one") {
    const AttentionConfig cfg = small_cfg();
    Rng rng{Seed{703}};
    const MhsaParams params = random_mhsa_params(cfg, rng);
    const Tensor x = rng.normal_tensor({cfg.channels, cfg.height, cfg.width});
    const AttentionMaps maps = compute_attention(x, params, cfg);
    for (index_t h = 0; h < cfg.heads; ++h) {
        for (index_t p = 0; p < cfg.tokens(); ++p) {
            double sum = 0.0;
            for (index_t j = 0; j < cfg.tokens(); ++j) {
                CHECK(maps.maps(h, p, j) >= 0.0);
                sum += maps.maps(h, p, j);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("compute_attention matches a from-scratch reimplementation") {
    AttentionConfig cfg;
    cfg.heads = 1;
    cfg.channels = 4;
    cfg.height = 4;
    cfg.width = 4;
    Rng rng{Seed{704}};
    const MhsaParams params = random_mhsa_params(cfg, rng);
    const Tensor x = rng.normal_tensor({cfg.channels, cfg.height, cfg.width});
    const AttentionMaps maps = compute_attention(x, params, cfg);

    const index_t n = cfg.tokens(), c = cfg.channels;
    Tensor logits({n, n});
    for (index_t p = 0; p < n; ++p) {
        for (index_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (index_t t = 0; t < c; ++t) {
                double qv = 0.0, kv = 0.0;
                for (index_t s = 0; s < c; ++s) {
                    const double tok_p = x(s, p / cfg.width, p % cfg.width);
                    const double tok_j = x(s, j / cfg.width, j % cfg.width);
                    qv += tok_p * params.wq(t, s);
                    kv += tok_j * params.wk(t, s);
                }
                acc += (qv + params.bq(t)) * (kv + params.bk(t));
            }
            logits(p, j) = acc / std::sqrt(static_cast<double>(c));
        }
    }
    const Tensor expected = oracle::softmax_rows_ld(logits);
    for (index_t p = 0; p < n; ++p)
        for (index_t j = 0; j < n; ++j)
            CHECK(maps.maps(0, p, j) == doctest::Approx(expected(p, j)).epsilon(1e-10));
}

TEST_CASE("apply_attention with identity maps returns the values") {
    const index_t heads = 2, d = 3, n = 6;
    Tensor maps({heads, n, n});
    for (index_t h = 0; h < heads; ++h)
        for (index_t p = 0; p < n; ++p) maps(h, p, p) = 1.0;
    AttentionMaps am{2, 3, maps};
    Rng rng{Seed{705}};
    const Tensor v = rng.normal_tensor({heads, d, n});
    CHECK(max_abs_diff(apply_attention(am, v), v) == 0.0);
}

TEST_CASE("apply_attention with uniform maps averages the values") {
    const index_t heads = 1, d = 2, n = 4;
    AttentionMaps am{2, 2, Tensor::full({heads, n, n}, 1.0 / n)};
    Rng rng{Seed{706}};
    const Tensor v = rng.normal_tensor({heads, d, n});
    const Tensor out = apply_attention(am, v);
    for (index_t k = 0; k < d; ++k) {
        double mean = 0.0;
        for (index_t j = 0; j < n; ++j) mean += v(0, k, j) / n;
        for (index_t p = 0; p < n; ++p) CHECK(out(0, k, p) == doctest::Approx(mean).epsilon(1e-12));
    }
}

TEST_CASE("apply_attention matches a naive loop") {
    const index_t heads = 3, d = 4, n = 9;
    Rng rng{Seed{707}};
    AttentionMaps am{3, 3, rng.normal_tensor({heads, n, n})};
    const Tensor v = rng.normal_tensor({heads, d, n});
    const Tensor out = apply_attention(am, v);
    for (index_t h = 0; h < heads; ++h)
        for (index_t k = 0; k < d; ++k)
            for (index_t p = 0; p < n; ++p) {
                double acc = 0.0;
                for (index_t j = 0; j < n; ++j) acc += am.maps(h, p, j) * v(h, k, j);
                CHECK(out(h, k, p) == doctest::Approx(acc).epsilon(1e-12));
            }
}

TEST_CASE("extract_query_filter reshapes the addressed row") {
    const index_t heads = 2, h = 3, w = 4, n = h * w;
    Tensor maps({heads, n, n});
    for (index_t hd = 0; hd < heads; ++hd)
        for (index_t p = 0; p < n; ++p)
            for (index_t j = 0; j < n; ++j) maps(hd, p, j) = 10000.0 * hd + 100.0 * p + j;
    AttentionMaps am{h, w, maps};
    const Tensor filter = extract_query_filter(am, 1, 2, 1);
    CHECK(filter.shape() == std::vector<index_t>{3, 4});
    const index_t row = 2 * w + 1;
    for (index_t i = 0; i < h; ++i)
        for (index_t j = 0; j < w; ++j) CHECK(filter(i, j) == 10000.0 + 100.0 * row + (i * w + j));
    CHECK_THROWS_AS(extract_query_filter(am, 2, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(extract_query_filter(am, 0, 3, 0), std::invalid_argument);
}

TEST_CASE("attention filters are low-pass: spectrum peaks at DC with value 1") {
    const AttentionConfig cfg = small_cfg();
    Rng rng{Seed{708}};
    const MhsaParams params = random_mhsa_params(cfg, rng);
    const Tensor x = rng.normal_tensor({cfg.channels, cfg.height, cfg.width});
    const AttentionMaps maps = compute_attention(x, params, cfg);
    for (index_t hd = 0; hd < cfg.heads; ++hd) {
        for (index_t p = 0; p < cfg.height; ++p) {
            for (index_t q = 0; q < cfg.width; ++q) {
                const ComplexTensor spec = dft2(extract_query_filter(maps, hd, p, q));
                CHECK(std::abs(spec(0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
                for (index_t i = 0; i < spec.numel(); ++i)
                    CHECK(std::abs(spec[i]) <= 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("row-stochastic maps preserve constant values") {
    const AttentionConfig cfg = small_cfg();
    Rng rng{Seed{709}};
    const MhsaParams params = random_mhsa_params(cfg, rng);
    const Tensor x = rng.normal_tensor({cfg.channels, cfg.height, cfg.width});
    const AttentionMaps maps = compute_attention(x, params, cfg);
    const Tensor v = Tensor::full({cfg.heads, cfg.head_dim(), cfg.tokens()}, 2.5);
    const Tensor out = apply_attention(maps, v);
    CHECK(max_abs_diff(out, v) < 1e-9);
}

TEST_CASE("zero value projection collapses mhsa output to the output bias") {
    const AttentionConfig cfg = small_cfg();
    Rng rng{Seed{710}};
    MhsaParams params = random_mhsa_params(cfg, rng);
    params.wv = Tensor({cfg.channels, cfg.channels});
    params.bv = Tensor({cfg.channels});
    for (index_t i = 0; i < cfg.channels; ++i) params.bo(i) = 0.25 * static_cast<double>(i);
    const Tensor x = rng.normal_tensor({cfg.channels, cfg.height, cfg.width});
    const MhsaResult res = mhsa_forward(x, params, cfg);
    for (index_t c = 0; c < cfg.channels; ++c)
        for (index_t i = 0; i < cfg.height; ++i)
            for (index_t j = 0; j < cfg.width; ++j) CHECK(res.output(c, i, j) == params.bo(c));
}

TEST_CASE("mhsa_forward equals attention_output at its own maps") {
    const AttentionConfig cfg = small_cfg();
    Rng rng{Seed{711}};
    const MhsaParams params = random_mhsa_params(cfg, rng);
    const Tensor x = rng.normal_tensor({cfg.channels, cfg.height, cfg.width});
    const MhsaResult res = mhsa_forward(x, params, cfg);
    const Tensor direct = attention_output(x, params, cfg, res.maps.maps);
    CHECK(max_abs_diff(res.output, direct) == 0.0);
    CHECK(res.maps.height == cfg.height);
    CHECK(res.maps.width == cfg.width);
}

TEST_CASE("random_mhsa_params is seed-deterministic with zero biases") {
    const AttentionConfig cfg = small_cfg();
    Rng a{Seed{712}}, b{Seed{712}};
    const MhsaParams pa = random_mhsa_params(cfg, a);
    const MhsaParams pb = random_mhsa_params(cfg, b);
    CHECK(max_abs_diff(pa.wq, pb.wq) == 0.0);
    CHECK(max_abs_diff(pa.wo, pb.wo) == 0.0);
    CHECK(max_abs(pa.bq) == 0.0);
    CHECK(max_abs(pa.bo) == 0.0);
    CHECK(max_abs_diff(pa.wq, pa.wk) > 0.0);
}

TEST_CASE("config validation rejects bad shapes") {
    AttentionConfig cfg = small_cfg();
    cfg.channels = 7;  // not divisible by heads=2
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_cfg();
    cfg.heads = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
