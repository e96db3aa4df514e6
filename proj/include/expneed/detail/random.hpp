#ifndef EXPNEED_DETAIL_RANDOM_HPP
#define EXPNEED_DETAIL_RANDOM_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace expneed::detail {

// std::mt19937_64 output is fixed by the standard, but the std distributions
// and std::shuffle are not. Everything stochastic goes through these helpers
// so that a seed produces the same result with every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), rejection sampling (no modulo bias).
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return draw % bound;
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Derives an independent stream seed (splitmix64 finalizer), e.g. per repeat
/// or per tree. `derive_seed(s, 0)` is not `s`; callers that need identity for
/// the first stream handle it explicitly.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace expneed::detail

#endif
