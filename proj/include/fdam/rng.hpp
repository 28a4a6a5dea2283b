#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fdam/tensor.hpp"

namespace fdam {

// Repo-wide deterministic generator. The raw 64-bit stream comes from
// std::mt19937_64, whose output sequence is fixed by the C++ standard.
// Derived quantities use fixed transforms of that stream:
//   uniform01: (next_u64() >> 11) * 2^-53, giving a double in [0, 1)
//   normal:    Box-Muller on a pair of uniforms; the second variate of each
//              pair is cached and returned by the next call
// Sub-streams (params vs. input noise vs. targets) come from derived(), which
// mixes the base seed with a stream id through splitmix64 so that runs
// differing only in stack mode still share attention params and input noise.
class Rng {
public:
    explicit Rng(Seed seed);

    Rng derived(std::uint64_t stream) const;

    std::uint64_t next_u64();
    double uniform01();
    double normal();

    std::vector<double> normals(index_t count);
    Tensor normal_tensor(std::vector<index_t> shape, double scale = 1.0);

    Seed seed() const { return seed_; }

private:
    Seed seed_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fdam
