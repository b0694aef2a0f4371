#ifndef ODINSIM_RNG_HPP
#define ODINSIM_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace odinsim
{

// SplitMix64 output function (Steele, Lea & Flood; Vigna's constants).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

// Counter-based draw: hashes an ordered tuple of keys into 64 bits. Used
// wherever a value must not depend on evaluation order (spike encoding,
// per-period fault streams).
constexpr std::uint64_t hash_keys(std::initializer_list<std::uint64_t> keys) noexcept
{
    std::uint64_t h = 0;
    for (const auto k : keys)
    {
        h = mix64(h ^ k);
    }
    return h;
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept
{
    return static_cast<double>(bits >> 11U) * 0x1.0p-53;
}

// Domain-separation tags so that e.g. enabling learning never perturbs the
// fault sequence of a run.
namespace stream
{
constexpr std::uint64_t encode = 0x656E636F6465ULL; // "encode"
constexpr std::uint64_t fault = 0x6661756C74ULL;    // "fault"
constexpr std::uint64_t eval = 0x6576616CULL;       // "eval"
constexpr std::uint64_t epoch = 0x65706F6368ULL;    // "epoch"
constexpr std::uint64_t label = 0x6C6162656CULL;    // "label"
constexpr std::uint64_t train = 0x747261696EULL;    // "train"
} // namespace stream

// Sequential SplitMix64 generator; satisfies UniformRandomBitGenerator.
__extension__ using uint128_t = unsigned __int128;

class SplitMix64
{
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31U);
    }

    constexpr double uniform() noexcept { return to_unit((*this)()); }

    // Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        if (bound == 0)
        {
            return 0;
        }
        auto m = static_cast<uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound)
        {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold)
            {
                m = static_cast<uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64U);
    }

private:
    std::uint64_t state_;
};

} // namespace odinsim

#endif // ODINSIM_RNG_HPP
