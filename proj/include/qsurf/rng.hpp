#pragma once

// Seed splitting.
//
// All randomness flows from one 64-bit user seed. Each consumer derives its
// own stream from (seed, purpose label, up to two indices):
//
//     stream_seed = splitmix64(splitmix64(seed ^ fnv1a(label)) ^ a·φ ^ b·φ²)
//
// so folds, undersampling, Universum pools/pairs and generators are
// independently reproducible. Only the engine output of std::mt19937_64 is
// used (its sequence is fixed by the standard); bounded integers and normals
// are computed here rather than through <random> distributions, whose
// algorithms are implementation-defined.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace qsurf {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t a = 0,
                          std::uint64_t b = 0);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::string_view label, std::uint64_t a = 0, std::uint64_t b = 0)
        : engine_(derive_seed(seed, label, a, b)) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);
    /// Uniform double in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    /// k distinct indices from [0, n), in draw order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qsurf
