#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "odinsim/error.hpp"
#include "odinsim/faultsim.hpp"
#include "odinsim/rng.hpp"

using namespace odinsim;

namespace
{

FaultModel beam_model(FaultScope scope)
{
    FaultModel m;
    m.mttu_s = 0.0;
    m.sigma = 4.17e-9;
    m.flux = 1.18e11 / (7.0 * 3600.0 + 10.0 * 60.0);
    m.scope = scope;
    return m;
}

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

TEST_CASE("upset rate and mean time to upset")
{
    SUBCASE("zero flux gives rate zero")
    {
        auto m = beam_model(FaultScope::full_memory);
        m.flux = 0.0;
        CHECK(upset_rate(m) == 0.0);
        CHECK(std::isinf(mean_time_to_upset(m)));
    }
    SUBCASE("beam flux over the full memory")
    {
        const auto m = beam_model(FaultScope::full_memory);
        CHECK(m.flux == doctest::Approx(4.574e6).epsilon(1e-3));
        const double expected = 25800.0 / (4.17e-9 * 1.18e11);
        CHECK(mean_time_to_upset(m) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(mean_time_to_upset(m) == doctest::Approx(52.4).epsilon(1e-3));
    }
    SUBCASE("relevant bits scale by eta")
    {
        const auto m = beam_model(FaultScope::relevant_bits);
        CHECK(mean_time_to_upset(m) == doctest::Approx(25800.0 / (4.17e-9 * 1.18e11) * 25.6).epsilon(1e-12));
        CHECK(mean_time_to_upset(m) == doctest::Approx(1342.0).epsilon(1e-3));
    }
    SUBCASE("a fixed MTTU overrides sigma and flux")
    {
        FaultModel m;
        CHECK(m.mttu_s == 1185.0);
        CHECK(upset_rate(m) == doctest::Approx(1.0 / 1185.0));
        CHECK(3600.0 * upset_rate(m) == doctest::Approx(3.038).epsilon(1e-3));
    }
    SUBCASE("invalid models are rejected")
    {
        FaultModel m;
        m.sigma = -1.0;
        CHECK_THROWS_AS(m.validate(), Error);
        m = FaultModel{};
        m.eta = 0.0;
        CHECK_THROWS_AS(m.validate(), Error);
        m.eta = 1.5;
        CHECK_THROWS_AS(m.validate(), Error);
    }
}

TEST_CASE("scope parsing")
{
    CHECK(parse_scope("full") == FaultScope::full_memory);
    CHECK(parse_scope("relevant") == FaultScope::relevant_bits);
    CHECK(to_string(FaultScope::relevant_bits) == "relevant");
    CHECK_THROWS_AS((void)parse_scope("some"), Error);
}

TEST_CASE("bit scopes")
{
    const BitScope full{256, 256, 10, FaultScope::full_memory};
    const BitScope rel{256, 256, 10, FaultScope::relevant_bits};
    CHECK(full.size() == 262144);
    CHECK(rel.size() == 10240);
    CHECK(static_cast<double>(rel.size()) / static_cast<double>(full.size()) == 10240.0 / 262144.0);

    std::set<std::uint64_t> seen;
    for (std::size_t k = 0; k < rel.size(); ++k)
    {
        const auto b = rel.bit(k);
        CHECK(rel.contains(b));
        CHECK((b / 4) % 256 < 10);
        seen.insert(b);
    }
    CHECK(seen.size() == rel.size());
    CHECK_FALSE(rel.contains(4 * 10));
    CHECK_FALSE(full.contains(262144));
}

TEST_CASE("schedule_upsets")
{
    FaultModel m;
    const BitScope scope{};
    SplitMix64 rng(1);

    SUBCASE("zero duration or zero rate yields nothing")
    {
        CHECK(schedule_upsets(m, scope, 0.0, rng).empty());
        m.mttu_s = 0.0;
        m.flux = 0.0;
        CHECK(schedule_upsets(m, scope, 1e6, rng).empty());
    }
    SUBCASE("negative duration is an error")
    {
        CHECK_THROWS_AS((void)schedule_upsets(m, scope, -1.0, rng), Error);
    }
    SUBCASE("events are sorted, in range and inside the scope")
    {
        const auto ev = schedule_upsets(m, scope, 120.0 * 3600.0, rng);
        CHECK(ev.size() > 250);
        for (std::size_t i = 0; i < ev.size(); ++i)
        {
            CHECK(ev[i].time_s >= 0.0);
            CHECK(ev[i].time_s < 120.0 * 3600.0);
            CHECK(scope.contains(ev[i].bit));
            if (i > 0)
            {
                CHECK(ev[i - 1].time_s <= ev[i].time_s);
            }
        }
    }
}

TEST_CASE("event counts follow the Poisson mean")
{
    FaultModel m;
    const BitScope scope{};
    const double lambda = 3600.0 / 1185.0;
    const int trials = 10000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < trials; ++i)
    {
        auto rng = fault_stream(m, 1, static_cast<std::uint64_t>(i));
        const auto n = static_cast<double>(schedule_upsets(m, scope, 3600.0, rng).size());
        sum += n;
        sum_sq += n * n;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    // 3 sigma of the sample mean: sqrt(lambda / N) ~ 0.0174 -> 1.7% of lambda.
    CHECK(std::abs(mean - lambda) < 3.0 * std::sqrt(lambda / trials));
    CHECK(var == doctest::Approx(lambda).epsilon(0.05));
}

TEST_CASE("apply_flip")
{
    SynapticMemory m;
    apply_flip(m, 0);
    CHECK(m.popcount() == 1);
    apply_flip(m, 0);
    CHECK(m.popcount() == 0);
    const auto r = random_memory(3);
    auto f = r;
    apply_flip(f, 12345);
    CHECK(hamming_distance(r, f) == 1);
    CHECK(f.bit(12345) != r.bit(12345));
    CHECK_THROWS_AS(apply_flip(f, f.total_bits()), Error);
}

TEST_CASE("fault streams are independent per period and seed")
{
    FaultModel m;
    auto a = fault_stream(m, 1, 1);
    auto b = fault_stream(m, 1, 2);
    auto c = fault_stream(m, 2, 1);
    auto a2 = fault_stream(m, 1, 1);
    const auto x = a();
    CHECK(x != b());
    CHECK(x != c());
    CHECK(x == a2());
}

TEST_CASE("unprotected injection conserves flips")
{
    FaultModel m;
    m.scope = FaultScope::full_memory;
    m.mttu_s = 50.0;
    const BitScope scope{256, 256, 10, FaultScope::full_memory};
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        const auto original = random_memory(seed);
        auto mutated = original;
        auto rng = fault_stream(m, seed, 1);
        const auto r = inject_period(mutated, m, scope, 2.0, rng);
        CHECK(r.flips == r.events.size());
        std::set<std::uint64_t> odd;
        for (const auto &e : r.events)
        {
            if (!odd.erase(e.bit))
            {
                odd.insert(e.bit);
            }
            CHECK(e.replica == -1);
            CHECK(mutated.flat_index({e.pre, e.post, e.offset}) == e.bit);
        }
        CHECK(hamming_distance(original, mutated) == odd.size());
    }
}

TEST_CASE("a zero-hour period changes nothing")
{
    FaultModel m;
    auto mem = random_memory(5);
    const auto before = mem;
    SplitMix64 rng(1);
    CHECK(inject_period(mem, m, BitScope{}, 0.0, rng).flips == 0);
    CHECK(mem == before);
    TmrMemory tmr(before);
    CHECK(inject_period(tmr, m, BitScope{}, 0.0, 10.0, rng).flips == 0);
    CHECK(tmr.voted() == before);
}

TEST_CASE("TMR majority vote")
{
    SynapticMemory zero;
    TmrMemory t(zero);
    CHECK_FALSE(t.read(7));
    t.replica(2).flip_bit(7);
    CHECK_FALSE(t.read(7)); // (0,0,1) -> 0
    CHECK_FALSE(t.consistent());
    t.replica(0).flip_bit(7);
    CHECK(t.read(7)); // (1,0,1) -> 1
    t.replica(1).flip_bit(7);
    CHECK(t.read(7)); // (1,1,1) -> 1
    t.scrub();
    CHECK(t.consistent());
}

TEST_CASE("TMR masks one flip per triplet")
{
    SplitMix64 rng(77);
    const auto golden = random_memory(6);
    TmrMemory t(golden);
    std::set<std::uint64_t> hit;
    while (hit.size() < 1000)
    {
        const auto bit = rng.below(golden.total_bits());
        if (hit.insert(bit).second)
        {
            t.replica(rng.below(3)).flip_bit(bit);
        }
    }
    for (const auto b : hit)
    {
        CHECK(t.read(b) == golden.bit(b));
    }
    CHECK(t.voted() == golden);
    t.scrub();
    CHECK(t.consistent());
    CHECK(t.replica(1) == golden);
}

TEST_CASE("a double hit in one triplet corrupts exactly one bit")
{
    const auto golden = random_memory(8);
    TmrMemory t(golden);
    t.replica(0).flip_bit(999);
    t.replica(2).flip_bit(999);
    t.replica(1).flip_bit(5);
    CHECK(hamming_distance(t.voted(), golden) == 1);
    CHECK(t.voted().bit(999) != golden.bit(999));
}

TEST_CASE("TMR injection with scrubbing masks sparse upsets")
{
    FaultModel m;
    const BitScope scope{};
    const auto golden = random_memory(10);
    int masked = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        TmrMemory t(golden);
        auto rng = fault_stream(m, seed, 1);
        const auto r = inject_period(t, m, scope, 120.0, 120.0 * 3600.0 / 1000.0, rng);
        CHECK(r.flips > 0);
        CHECK(t.consistent());
        for (const auto &e : r.events)
        {
            CHECK(e.replica >= 0);
            CHECK(e.replica < 3);
        }
        masked += t.voted() == golden ? 1 : 0;
    }
    CHECK(masked >= 19);
}

TEST_CASE("event CSV")
{
    std::ostringstream os;
    write_events_csv_header(os);
    write_events_csv(os, {{1.5, 9, 0, 2, 1, -1}}, 4, 2);
    CHECK(os.str() == "seed,period,time_s,bit_index,pre,post,offset,replica\n4,2,1.5,9,0,2,1,-1\n");
}
