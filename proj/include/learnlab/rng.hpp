#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace learnlab {

/// Name recorded in manifests. std::mt19937_64 output is fixed by the
/// standard, and every distribution below is implemented here rather than
/// taken from <random>, whose distributions are implementation-defined.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64; substream seed = splitmix64(seed ^ splitmix64(stream + 1)); "
    "uniform ints by rejection; doubles from the top 53 bits";

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent substream (one per suite block, trial, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = uniform_below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace learnlab
