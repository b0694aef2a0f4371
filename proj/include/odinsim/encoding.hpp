#ifndef ODINSIM_ENCODING_HPP
#define ODINSIM_ENCODING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "odinsim/idx.hpp"

namespace odinsim
{

constexpr std::size_t kInputSide = 16;
constexpr std::size_t kInputCount = kInputSide * kInputSide;

// Downscaled, label-carrying inputs ready for rate coding. ids are the
// sample identities used as encoding keys; they stay attached to a sample
// when subsets are taken so that a sample always gets the same spike train.
struct InputSet
{
    std::vector<std::uint8_t> intensities; // size() * kInputCount
    std::vector<std::uint8_t> labels;
    std::vector<std::uint32_t> ids;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] bool empty() const noexcept { return labels.empty(); }
    [[nodiscard]] std::span<const std::uint8_t> sample(std::size_t i) const noexcept
    {
        return {intensities.data() + i * kInputCount, kInputCount};
    }
    void push_back(std::span<const std::uint8_t> pixels16, std::uint8_t label, std::uint32_t id);
    [[nodiscard]] InputSet slice(std::size_t begin, std::size_t count) const;
};

// 28x28 -> 16x16: zero-pad to a centered 32x32 frame, then average 2x2
// blocks (rounded half up).
[[nodiscard]] std::vector<std::uint8_t> downscale_to_16(std::span<const std::uint8_t> image, std::size_t rows,
                                                        std::size_t cols);

[[nodiscard]] InputSet prepare_inputs(const ImageSet &images, std::size_t begin, std::size_t count);

// Clusterable toy task: class c lights the c-th of n_classes disjoint
// horizontal bands of the 16x16 input with intensities in [192, 255].
[[nodiscard]] InputSet make_synthetic_set(std::size_t n_classes, std::size_t per_class, std::uint64_t seed);

struct EncodedSample
{
    std::vector<std::uint16_t> spikes;     // input indices, grouped by step
    std::vector<std::uint32_t> step_begin; // steps + 1 offsets into spikes
    std::uint8_t label = 0;

    [[nodiscard]] std::size_t steps() const noexcept { return step_begin.empty() ? 0 : step_begin.size() - 1; }
    [[nodiscard]] std::span<const std::uint16_t> at(std::size_t step) const noexcept
    {
        return {spikes.data() + step_begin[step], step_begin[step + 1] - step_begin[step]};
    }
    [[nodiscard]] std::size_t total_spikes() const noexcept { return spikes.size(); }
};

struct RateCode
{
    std::size_t steps = 192;
    double r_max = 0.05;
};

// Input i spikes at step t iff hash(seed, sample_id, i, t) < intensity_i/255 * r_max.
// The draw is counter-based, so the train does not depend on evaluation order.
void encode_into(EncodedSample &out, std::span<const std::uint8_t> intensities, std::uint8_t label,
                 std::uint64_t seed, std::uint64_t sample_id, const RateCode &code);

[[nodiscard]] EncodedSample encode_sample(std::span<const std::uint8_t> image28, std::uint8_t label,
                                          std::uint64_t seed, std::uint64_t sample_id, const RateCode &code);

} // namespace odinsim

#endif // ODINSIM_ENCODING_HPP
