#ifndef ODINSIM_DUMP_HPP
#define ODINSIM_DUMP_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "odinsim/synaptic_memory.hpp"

namespace odinsim
{

constexpr std::uint16_t kDumpVersion = 1;
// "ODMP", version, n_pre, n_post, bits_per_entry, seed, timestamp_s.
constexpr std::size_t kDumpHeaderSize = 4 + 2 + 2 + 2 + 1 + 8 + 8;

struct DumpHeader
{
    std::uint16_t version = kDumpVersion;
    std::uint16_t n_pre = 256;
    std::uint16_t n_post = 256;
    std::uint8_t bits_per_entry = kBitsPerEntry;
    std::uint64_t seed = 0;
    std::uint64_t timestamp_s = 0;

    [[nodiscard]] std::size_t total_bits() const noexcept
    {
        return std::size_t{n_pre} * n_post * bits_per_entry;
    }
    [[nodiscard]] std::size_t payload_bytes() const noexcept { return (total_bits() + 7) / 8; }
    friend bool operator==(const DumpHeader &, const DumpHeader &) = default;
};

// Header fields are little-endian; the payload is the memory's bit image,
// flat bit b at payload byte b/8, bit b%8.
struct DumpFile
{
    DumpHeader header;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const DumpFile &, const DumpFile &) = default;
};

[[nodiscard]] DumpFile dump(const SynapticMemory &memory, std::uint64_t seed = 0, std::uint64_t timestamp_s = 0);
[[nodiscard]] SynapticMemory load(const DumpFile &file);

[[nodiscard]] std::vector<std::uint8_t> serialize(const DumpFile &file);
[[nodiscard]] DumpFile parse_dump(std::span<const std::uint8_t> bytes);

[[nodiscard]] DumpFile read_dump(const std::filesystem::path &path);
// Written to a temporary sibling first, then renamed into place.
void write_dump(const std::filesystem::path &path, const DumpFile &file);

struct DumpDiff
{
    std::size_t count = 0;
    std::vector<std::uint64_t> positions; // ascending flat bit indices
};

[[nodiscard]] DumpDiff diff(const DumpFile &a, const DumpFile &b);

} // namespace odinsim

#endif // ODINSIM_DUMP_HPP
