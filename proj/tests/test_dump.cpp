#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "odinsim/dump.hpp"
#include "odinsim/error.hpp"
#include "odinsim/faultsim.hpp"
#include "odinsim/rng.hpp"
#include "support.hpp"

using namespace odinsim;

namespace
{

SynapticMemory random_memory(std::uint64_t seed)
{
    SynapticMemory m;
    SplitMix64 rng(seed);
    for (auto &b : m.bytes())
    {
        b = static_cast<std::uint8_t>(rng());
    }
    return m;
}

} // namespace

TEST_CASE("dump layout")
{
    SynapticMemory m;
    auto d = dump(m);
    CHECK(d.payload.size() == 32768);
    CHECK(d.header.payload_bytes() == 256u * 256u * 4u / 8u);
    CHECK(std::all_of(d.payload.begin(), d.payload.end(), [](auto b) { return b == 0; }));

    m.set_bit(9, true);
    d = dump(m);
    CHECK(d.payload[1] == 0x02);
    CHECK(std::count(d.payload.begin(), d.payload.end(), 0) == 32767);
}

TEST_CASE("serialized header")
{
    const auto bytes = serialize(dump(SynapticMemory{}, 0x0102030405060708ULL, 42));
    REQUIRE(bytes.size() == kDumpHeaderSize + 32768);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "ODMP");
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 0x00); // n_pre = 256 little-endian
    CHECK(bytes[7] == 0x01);
    CHECK(bytes[10] == 4);
    CHECK(bytes[11] == 0x08);
    CHECK(bytes[18] == 0x01);
    CHECK(bytes[19] == 42);
}

TEST_CASE("round trips")
{
    const auto m = random_memory(1);
    const auto d = dump(m, 7, 9);
    CHECK(load(d) == m);
    const auto bytes = serialize(d);
    const auto back = parse_dump(bytes);
    CHECK(back == d);
    CHECK(serialize(dump(load(back), 7, 9)) == bytes);

    const auto dir = testing::temp_dir("dump");
    write_dump(dir / "a.odmp", d);
    CHECK(read_dump(dir / "a.odmp") == d);
    CHECK_FALSE(std::filesystem::exists(dir / "a.odmp.tmp"));
}

TEST_CASE("malformed dumps")
{
    auto bytes = serialize(dump(random_memory(2)));

    SUBCASE("bad magic")
    {
        bytes[0] = 'X';
        try
        {
            (void)parse_dump(bytes);
            FAIL("expected a parse error");
        }
        catch (const ParseError &e)
        {
            CHECK(e.offset() == 0);
        }
    }
    SUBCASE("version mismatch")
    {
        bytes[4] = 2;
        try
        {
            (void)parse_dump(bytes);
            FAIL("expected a parse error");
        }
        catch (const ParseError &e)
        {
            CHECK(e.offset() == 4);
        }
    }
    SUBCASE("length mismatch")
    {
        bytes.pop_back();
        CHECK_THROWS_AS((void)parse_dump(bytes), ParseError);
        bytes.push_back(0);
        bytes.push_back(0);
        CHECK_THROWS_AS((void)parse_dump(bytes), ParseError);
    }
    SUBCASE("truncated header")
    {
        bytes.resize(10);
        CHECK_THROWS_AS((void)parse_dump(bytes), ParseError);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS((void)read_dump("/nonexistent/x.odmp"), Error);
    }
}

TEST_CASE("diff")
{
    const auto a = dump(random_memory(3));

    SUBCASE("identical dumps")
    {
        const auto d = diff(a, a);
        CHECK(d.count == 0);
        CHECK(d.positions.empty());
    }
    SUBCASE("single flip at 42")
    {
        auto m = load(a);
        apply_flip(m, 42);
        const auto d = diff(a, dump(m));
        CHECK(d.count == 1);
        CHECK(d.positions == std::vector<std::uint64_t>{42});
    }
    SUBCASE("symmetric and equal to the injected set")
    {
        SplitMix64 rng(4);
        std::set<std::uint64_t> bits;
        auto m = load(a);
        while (bits.size() < 300)
        {
            const auto b = rng.below(m.total_bits());
            if (bits.insert(b).second)
            {
                apply_flip(m, b);
            }
        }
        const auto b = dump(m);
        const auto ab = diff(a, b);
        const auto ba = diff(b, a);
        CHECK(ab.count == 300);
        CHECK(ab.positions == std::vector<std::uint64_t>(bits.begin(), bits.end()));
        CHECK(ba.positions == ab.positions);
    }
    SUBCASE("geometry mismatch")
    {
        const auto small = dump(SynapticMemory(16, 16));
        CHECK_THROWS_AS((void)diff(a, small), Error);
    }
}

TEST_CASE("injection followed by diff counts distinct flips")
{
    FaultModel m;
    m.mttu_s = 100.0;
    m.scope = FaultScope::full_memory;
    const BitScope scope{256, 256, 10, FaultScope::full_memory};
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        const auto before = random_memory(seed);
        auto after = before;
        auto rng = fault_stream(m, seed, 0);
        const auto r = inject_period(after, m, scope, 3.0, rng);
        std::set<std::uint64_t> odd;
        for (const auto &e : r.events)
        {
            if (!odd.erase(e.bit))
            {
                odd.insert(e.bit);
            }
        }
        const auto d = diff(dump(before), dump(after));
        CHECK(d.count == odd.size());
        CHECK(d.positions == std::vector<std::uint64_t>(odd.begin(), odd.end()));
    }
}
