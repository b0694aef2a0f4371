#include "odinsim/synaptic_memory.hpp"

#include <bit>
#include <string>

#include "odinsim/error.hpp"

namespace odinsim
{

SynapticMemory::SynapticMemory(std::size_t n_pre, std::size_t n_post)
    : n_pre_(n_pre)
    , n_post_(n_post)
    , bytes_((n_pre * n_post * kBitsPerEntry + 7) / 8, 0)
{
    if (n_pre == 0 || n_post == 0)
    {
        throw Error("synaptic memory needs at least one pre and one post line");
    }
}

void SynapticMemory::set_entry(std::size_t pre, std::size_t post, SynapseEntry e) noexcept
{
    const std::size_t rec = pre * n_post_ + post;
    const unsigned shift = (rec & 1U) * 4U;
    auto &byte = bytes_[rec >> 1U];
    byte = static_cast<std::uint8_t>((byte & ~(0xFU << shift)) | (e.pack() << shift));
}

static void check_index(std::size_t index, std::size_t total)
{
    if (index >= total)
    {
        throw Error("bit index " + std::to_string(index) + " out of range (memory has " +
                    std::to_string(total) + " bits)");
    }
}

bool SynapticMemory::bit(std::size_t index) const
{
    check_index(index, total_bits());
    return ((bytes_[index >> 3U] >> (index & 7U)) & 1U) != 0;
}

void SynapticMemory::set_bit(std::size_t index, bool value)
{
    check_index(index, total_bits());
    const auto mask = static_cast<std::uint8_t>(1U << (index & 7U));
    if (value)
    {
        bytes_[index >> 3U] |= mask;
    }
    else
    {
        bytes_[index >> 3U] &= static_cast<std::uint8_t>(~mask);
    }
}

void SynapticMemory::flip_bit(std::size_t index)
{
    check_index(index, total_bits());
    bytes_[index >> 3U] ^= static_cast<std::uint8_t>(1U << (index & 7U));
}

BitAddress SynapticMemory::address(std::size_t index) const noexcept
{
    const std::size_t rec = index / kBitsPerEntry;
    return {rec / n_post_, rec % n_post_, index % kBitsPerEntry};
}

std::size_t SynapticMemory::popcount() const noexcept
{
    std::size_t n = 0;
    for (const auto b : bytes_)
    {
        n += static_cast<std::size_t>(std::popcount(b));
    }
    return n;
}

std::uint64_t SynapticMemory::hash() const noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto b : bytes_)
    {
        h = (h ^ b) * 0x100000001B3ULL;
    }
    return h;
}

std::size_t hamming_distance(const SynapticMemory &a, const SynapticMemory &b)
{
    if (a.n_pre() != b.n_pre() || a.n_post() != b.n_post())
    {
        throw Error("hamming distance between memories of different geometry");
    }
    std::size_t n = 0;
    const auto x = a.bytes();
    const auto y = b.bytes();
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        n += static_cast<std::size_t>(std::popcount(static_cast<std::uint8_t>(x[i] ^ y[i])));
    }
    return n;
}

} // namespace odinsim
