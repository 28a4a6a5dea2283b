#include "fdam/rng.hpp"

#include <cmath>

namespace fdam {

namespace {

// splitmix64 step (Steele/Lea/Flood); used only to spread seed bits and to
// derive independent sub-streams.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(Seed seed) : seed_(seed), engine_(seed.value) {}

Rng Rng::derived(std::uint64_t stream) const {
    std::uint64_t state = seed_.value;
    std::uint64_t mixed = splitmix64(state);
    state ^= stream;
    mixed ^= splitmix64(state);
    return Rng(Seed{mixed});
}

std::uint64_t Rng::next_u64() {
    return engine_();
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::vector<double> Rng::normals(index_t count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (double& v : out) v = normal();
    return out;
}

Tensor Rng::normal_tensor(std::vector<index_t> shape, double scale) {
    Tensor t(std::move(shape));
    for (index_t i = 0; i < t.numel(); ++i) t[i] = normal() * scale;
    return t;
}

}  // namespace fdam
