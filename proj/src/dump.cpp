#include "odinsim/dump.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <string>

#include "odinsim/error.hpp"
#include "odinsim/idx.hpp"
#include "odinsim/io.hpp"

namespace odinsim
{

namespace
{

constexpr std::array<std::uint8_t, 4> kMagic{'O', 'D', 'M', 'P'};

template <typename T>
void put_le(std::vector<std::uint8_t> &out, T value)
{
    for (std::size_t i = 0; i < sizeof(T); ++i)
    {
        out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8U * i)));
    }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t &pos)
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
    {
        v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8U * i);
    }
    pos += sizeof(T);
    return static_cast<T>(v);
}

} // namespace

DumpFile dump(const SynapticMemory &memory, std::uint64_t seed, std::uint64_t timestamp_s)
{
    if (memory.n_pre() > 0xFFFF || memory.n_post() > 0xFFFF)
    {
        throw Error("memory geometry does not fit the dump header");
    }
    DumpFile f;
    f.header.n_pre = static_cast<std::uint16_t>(memory.n_pre());
    f.header.n_post = static_cast<std::uint16_t>(memory.n_post());
    f.header.seed = seed;
    f.header.timestamp_s = timestamp_s;
    const auto b = memory.bytes();
    f.payload.assign(b.begin(), b.end());
    return f;
}

SynapticMemory load(const DumpFile &file)
{
    const auto &h = file.header;
    if (h.version != kDumpVersion)
    {
        throw Error("dump version " + std::to_string(h.version) + " is not supported");
    }
    if (h.bits_per_entry != kBitsPerEntry)
    {
        throw Error("dump has " + std::to_string(h.bits_per_entry) + " bits per entry, expected 4");
    }
    if (file.payload.size() != h.payload_bytes())
    {
        throw Error("dump payload is " + std::to_string(file.payload.size()) + " bytes, header implies " +
                    std::to_string(h.payload_bytes()));
    }
    SynapticMemory m(h.n_pre, h.n_post);
    std::copy(file.payload.begin(), file.payload.end(), m.bytes().begin());
    return m;
}

std::vector<std::uint8_t> serialize(const DumpFile &file)
{
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.reserve(kDumpHeaderSize + file.payload.size());
    put_le(out, file.header.version);
    put_le(out, file.header.n_pre);
    put_le(out, file.header.n_post);
    put_le(out, file.header.bits_per_entry);
    put_le(out, file.header.seed);
    put_le(out, file.header.timestamp_s);
    out.insert(out.end(), file.payload.begin(), file.payload.end());
    return out;
}

DumpFile parse_dump(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kDumpHeaderSize)
    {
        throw ParseError("dump header truncated", bytes.size());
    }
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
    {
        throw ParseError("bad dump magic", 0);
    }
    std::size_t pos = 4;
    DumpFile f;
    f.header.version = get_le<std::uint16_t>(bytes, pos);
    if (f.header.version != kDumpVersion)
    {
        throw ParseError("dump version " + std::to_string(f.header.version) + " is not supported", 4);
    }
    f.header.n_pre = get_le<std::uint16_t>(bytes, pos);
    f.header.n_post = get_le<std::uint16_t>(bytes, pos);
    f.header.bits_per_entry = get_le<std::uint8_t>(bytes, pos);
    f.header.seed = get_le<std::uint64_t>(bytes, pos);
    f.header.timestamp_s = get_le<std::uint64_t>(bytes, pos);
    const std::size_t want = f.header.payload_bytes();
    const std::size_t have = bytes.size() - kDumpHeaderSize;
    if (have != want)
    {
        throw ParseError("dump payload length " + std::to_string(have) + " does not match header (" +
                             std::to_string(want) + " bytes)",
                         kDumpHeaderSize + std::min(have, want));
    }
    f.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(kDumpHeaderSize), bytes.end());
    return f;
}

DumpFile read_dump(const std::filesystem::path &path)
{
    const auto bytes = read_file(path);
    try
    {
        return parse_dump(bytes);
    }
    catch (const ParseError &e)
    {
        throw Error(path.string() + ": " + e.what());
    }
}

void write_dump(const std::filesystem::path &path, const DumpFile &file)
{
    const auto bytes = serialize(file);
    write_file_atomic(path, {reinterpret_cast<const char *>(bytes.data()), bytes.size()});
}

DumpDiff diff(const DumpFile &a, const DumpFile &b)
{
    const auto &ha = a.header;
    const auto &hb = b.header;
    if (ha.n_pre != hb.n_pre || ha.n_post != hb.n_post || ha.bits_per_entry != hb.bits_per_entry)
    {
        throw Error("dump geometry mismatch");
    }
    if (a.payload.size() != ha.payload_bytes() || b.payload.size() != hb.payload_bytes())
    {
        throw Error("dump payload length does not match header");
    }
    DumpDiff d;
    for (std::size_t i = 0; i < a.payload.size(); ++i)
    {
        auto x = static_cast<unsigned>(a.payload[i] ^ b.payload[i]);
        while (x != 0)
        {
            const auto bit = static_cast<unsigned>(std::countr_zero(x));
            d.positions.push_back(i * 8 + bit);
            x &= x - 1;
        }
    }
    d.count = d.positions.size();
    return d;
}

} // namespace odinsim
