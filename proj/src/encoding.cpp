#include "odinsim/encoding.hpp"

#include <algorithm>
#include <array>

#include "odinsim/error.hpp"
#include "odinsim/rng.hpp"

namespace odinsim
{

void InputSet::push_back(std::span<const std::uint8_t> pixels16, std::uint8_t label, std::uint32_t id)
{
    if (pixels16.size() != kInputCount)
    {
        throw Error("input sample must have 256 intensities");
    }
    intensities.insert(intensities.end(), pixels16.begin(), pixels16.end());
    labels.push_back(label);
    ids.push_back(id);
}

InputSet InputSet::slice(std::size_t begin, std::size_t count) const
{
    InputSet out;
    const std::size_t end = std::min(size(), begin + count);
    for (std::size_t i = begin; i < end; ++i)
    {
        out.push_back(sample(i), labels[i], ids[i]);
    }
    return out;
}

std::vector<std::uint8_t> downscale_to_16(std::span<const std::uint8_t> image, std::size_t rows, std::size_t cols)
{
    constexpr std::size_t frame = 2 * kInputSide;
    if (rows > frame || cols > frame || image.size() != rows * cols)
    {
        throw Error("downscale expects an image of at most 32x32 pixels");
    }
    const std::size_t top = (frame - rows) / 2;
    const std::size_t left = (frame - cols) / 2;
    auto px = [&](std::size_t r, std::size_t c) -> unsigned {
        if (r < top || c < left || r >= top + rows || c >= left + cols)
        {
            return 0;
        }
        return image[(r - top) * cols + (c - left)];
    };

    std::vector<std::uint8_t> out(kInputCount);
    for (std::size_t r = 0; r < kInputSide; ++r)
    {
        for (std::size_t c = 0; c < kInputSide; ++c)
        {
            const unsigned sum = px(2 * r, 2 * c) + px(2 * r, 2 * c + 1) + px(2 * r + 1, 2 * c) +
                                 px(2 * r + 1, 2 * c + 1);
            out[r * kInputSide + c] = static_cast<std::uint8_t>((sum + 2) / 4);
        }
    }
    return out;
}

InputSet prepare_inputs(const ImageSet &images, std::size_t begin, std::size_t count)
{
    if (images.labels.size() != images.size())
    {
        throw Error("image set has no labels");
    }
    InputSet out;
    const std::size_t end = std::min(images.size(), begin + count);
    out.intensities.reserve((end - begin) * kInputCount);
    for (std::size_t i = begin; i < end; ++i)
    {
        out.push_back(downscale_to_16(images.image(i), images.rows, images.cols), images.labels[i],
                      static_cast<std::uint32_t>(i));
    }
    return out;
}

void encode_into(EncodedSample &out, std::span<const std::uint8_t> intensities, std::uint8_t label,
                 std::uint64_t seed, std::uint64_t sample_id, const RateCode &code)
{
    out.spikes.clear();
    out.step_begin.assign(1, 0);
    out.label = label;

    // Silent inputs never spike; skip them up front.
    std::array<double, kInputCount> prob{};
    std::array<std::uint16_t, kInputCount> active{};
    std::size_t n_active = 0;
    for (std::size_t i = 0; i < intensities.size() && i < kInputCount; ++i)
    {
        if (intensities[i] != 0)
        {
            prob[n_active] = static_cast<double>(intensities[i]) / 255.0 * code.r_max;
            active[n_active++] = static_cast<std::uint16_t>(i);
        }
    }

    const std::uint64_t base = hash_keys({stream::encode, seed, sample_id});
    for (std::size_t t = 0; t < code.steps; ++t)
    {
        for (std::size_t k = 0; k < n_active; ++k)
        {
            const double u = to_unit(hash_keys({base, active[k], t}));
            if (u < prob[k])
            {
                out.spikes.push_back(active[k]);
            }
        }
        out.step_begin.push_back(static_cast<std::uint32_t>(out.spikes.size()));
    }
}

EncodedSample encode_sample(std::span<const std::uint8_t> image28, std::uint8_t label, std::uint64_t seed,
                            std::uint64_t sample_id, const RateCode &code)
{
    const auto small = downscale_to_16(image28, 28, 28);
    EncodedSample out;
    encode_into(out, small, label, seed, sample_id, code);
    return out;
}

InputSet make_synthetic_set(std::size_t n_classes, std::size_t per_class, std::uint64_t seed)
{
    if (n_classes == 0 || n_classes > kInputSide)
    {
        throw Error("synthetic set needs 1..16 classes");
    }
    InputSet out;
    std::vector<std::uint8_t> pixels(kInputCount);
    std::uint32_t id = 0;
    for (std::size_t k = 0; k < per_class; ++k)
    {
        for (std::size_t c = 0; c < n_classes; ++c)
        {
            for (std::size_t i = 0; i < kInputCount; ++i)
            {
                const std::size_t band = (i / kInputSide) * n_classes / kInputSide;
                const auto jitter = hash_keys({seed, id, i}) % 64U;
                pixels[i] = band == c ? static_cast<std::uint8_t>(192U + jitter) : 0;
            }
            out.push_back(pixels, static_cast<std::uint8_t>(c), id++);
        }
    }
    return out;
}

} // namespace odinsim
