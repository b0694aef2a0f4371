#ifndef ODINSIM_SYNAPTIC_MEMORY_HPP
#define ODINSIM_SYNAPTIC_MEMORY_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace odinsim
{

constexpr std::size_t kBitsPerEntry = 4;
constexpr std::uint8_t kWeightMax = 7;
constexpr std::uint8_t kMappingBit = 0x8;
constexpr std::uint8_t kWeightMask = 0x7;

// One crossbar record: 3-bit weight in bits 0..2, mapping bit in bit 3.
struct SynapseEntry
{
    std::uint8_t weight = 0;
    bool mapped = false;

    [[nodiscard]] constexpr std::uint8_t pack() const noexcept
    {
        return static_cast<std::uint8_t>((weight & kWeightMask) | (mapped ? kMappingBit : 0));
    }
    static constexpr SynapseEntry unpack(std::uint8_t nibble) noexcept
    {
        return {static_cast<std::uint8_t>(nibble & kWeightMask), (nibble & kMappingBit) != 0};
    }
    friend constexpr bool operator==(SynapseEntry, SynapseEntry) = default;
};

struct BitAddress
{
    std::size_t pre = 0;
    std::size_t post = 0;
    std::size_t offset = 0; // bit within the 4-bit record
    friend constexpr bool operator==(const BitAddress &, const BitAddress &) = default;
};

// Dense n_pre x n_post crossbar of 4-bit records, stored as a little-endian
// packed bit image: flat bit b lives at byte b/8, bit b%8. Record (pre, post)
// starts at flat bit (pre * n_post + post) * 4, so each byte holds two records.
class SynapticMemory
{
public:
    SynapticMemory() : SynapticMemory(256, 256) {}
    SynapticMemory(std::size_t n_pre, std::size_t n_post);

    [[nodiscard]] std::size_t n_pre() const noexcept { return n_pre_; }
    [[nodiscard]] std::size_t n_post() const noexcept { return n_post_; }
    [[nodiscard]] std::size_t total_bits() const noexcept
    {
        return n_pre_ * n_post_ * kBitsPerEntry;
    }

    [[nodiscard]] SynapseEntry entry(std::size_t pre, std::size_t post) const noexcept
    {
        return SynapseEntry::unpack(nibble(pre, post));
    }
    void set_entry(std::size_t pre, std::size_t post, SynapseEntry e) noexcept;

    // Raw 4-bit record; hot path of the simulator.
    [[nodiscard]] std::uint8_t nibble(std::size_t pre, std::size_t post) const noexcept
    {
        const std::size_t rec = pre * n_post_ + post;
        return static_cast<std::uint8_t>((bytes_[rec >> 1U] >> ((rec & 1U) * 4U)) & 0xFU);
    }

    [[nodiscard]] bool bit(std::size_t index) const;
    void set_bit(std::size_t index, bool value);
    void flip_bit(std::size_t index);

    [[nodiscard]] std::size_t flat_index(const BitAddress &addr) const noexcept
    {
        return (addr.pre * n_post_ + addr.post) * kBitsPerEntry + addr.offset;
    }
    [[nodiscard]] BitAddress address(std::size_t index) const noexcept;

    [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
    [[nodiscard]] std::span<std::uint8_t> bytes() noexcept { return bytes_; }

    [[nodiscard]] std::size_t popcount() const noexcept;
    // FNV-1a over the bit image; used to check that evaluation is read-only.
    [[nodiscard]] std::uint64_t hash() const noexcept;

    friend bool operator==(const SynapticMemory &, const SynapticMemory &) = default;

private:
    std::size_t n_pre_;
    std::size_t n_post_;
    std::vector<std::uint8_t> bytes_;
};

// Number of differing bits between two memories of identical geometry.
[[nodiscard]] std::size_t hamming_distance(const SynapticMemory &a, const SynapticMemory &b);

} // namespace odinsim

#endif // ODINSIM_SYNAPTIC_MEMORY_HPP
