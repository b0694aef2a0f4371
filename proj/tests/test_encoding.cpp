#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "odinsim/encoding.hpp"
#include "odinsim/error.hpp"

using namespace odinsim;

namespace
{

std::vector<std::uint8_t> pattern_image()
{
    std::vector<std::uint8_t> img(784, 0);
    for (std::size_t r = 4; r < 24; ++r)
    {
        for (std::size_t c = 6; c < 22; ++c)
        {
            img[r * 28 + c] = static_cast<std::uint8_t>((r * 37 + c * 11) % 256);
        }
    }
    return img;
}

std::string render(const EncodedSample &s)
{
    std::ostringstream os;
    for (std::size_t t = 0; t < s.steps(); ++t)
    {
        os << t << ':';
        for (const auto i : s.at(t))
        {
            os << ' ' << i;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace

TEST_CASE("downscale averages 2x2 blocks of the padded frame")
{
    std::vector<std::uint8_t> img(784, 0);
    // Image pixel (0,0) sits at padded (2,2), i.e. block (1,1) top-left.
    img[0] = 255;
    const auto small = downscale_to_16(img, 28, 28);
    REQUIRE(small.size() == 256);
    CHECK(small[1 * 16 + 1] == 64); // (255 + 0 + 0 + 0) / 4 rounded half up
    CHECK(small[0] == 0);

    std::vector<std::uint8_t> full(784, 255);
    const auto s2 = downscale_to_16(full, 28, 28);
    CHECK(s2[0] == 0);          // entirely padding
    CHECK(s2[1 * 16 + 1] == 255);
    CHECK(s2[8 * 16 + 8] == 255);

    std::vector<std::uint8_t> odd(784, 0);
    odd[0] = 1;
    odd[1] = 1; // block sum 2 -> 0.5 -> rounds up to 1
    CHECK(downscale_to_16(odd, 28, 28)[17] == 1);
}

TEST_CASE("all-zero image never spikes")
{
    const std::vector<std::uint8_t> img(784, 0);
    const auto s = encode_sample(img, 3, 1, 0, RateCode{64, 1.0});
    CHECK(s.steps() == 64);
    CHECK(s.total_spikes() == 0);
    CHECK(s.label == 3);
}

TEST_CASE("single saturated input with r_max 1 spikes every step")
{
    std::vector<std::uint8_t> px(kInputCount, 0);
    px[77] = 255;
    EncodedSample s;
    encode_into(s, px, 0, 9, 4, RateCode{50, 1.0});
    CHECK(s.total_spikes() == 50);
    for (std::size_t t = 0; t < s.steps(); ++t)
    {
        REQUIRE(s.at(t).size() == 1);
        CHECK(s.at(t)[0] == 77);
    }
}

TEST_CASE("spike indices are valid and steps bounded")
{
    const auto s = encode_sample(pattern_image(), 1, 5, 17, RateCode{32, 0.8});
    CHECK(s.steps() == 32);
    for (const auto i : s.spikes)
    {
        CHECK(i < kInputCount);
    }
}

TEST_CASE("rate tracks intensity")
{
    std::vector<std::uint8_t> px(kInputCount, 0);
    px[0] = 255;
    px[1] = 64;
    EncodedSample s;
    encode_into(s, px, 0, 1, 2, RateCode{20000, 0.5});
    std::size_t n0 = 0;
    std::size_t n1 = 0;
    for (const auto i : s.spikes)
    {
        (i == 0 ? n0 : n1) += 1;
    }
    CHECK(static_cast<double>(n0) / 20000.0 == doctest::Approx(0.5).epsilon(0.03));
    CHECK(static_cast<double>(n1) / 20000.0 == doctest::Approx(0.5 * 64.0 / 255.0).epsilon(0.05));
}

TEST_CASE("encoding depends only on (seed, sample id)")
{
    const auto img = pattern_image();
    const auto a = encode_sample(img, 0, 42, 3, RateCode{64, 0.5});
    const auto b = encode_sample(img, 0, 42, 3, RateCode{64, 0.5});
    CHECK(a.spikes == b.spikes);
    CHECK(a.step_begin == b.step_begin);
    const auto c = encode_sample(img, 0, 42, 4, RateCode{64, 0.5});
    const auto d = encode_sample(img, 0, 43, 3, RateCode{64, 0.5});
    CHECK(a.spikes != c.spikes);
    CHECK(a.spikes != d.spikes);
}

TEST_CASE("spike train matches the frozen golden file")
{
    const auto s = encode_sample(pattern_image(), 0, 42, 3, RateCode{64, 0.5});
    std::ifstream in(std::string(ODINSIM_TEST_GOLDEN_DIR) + "/encode_seed42_id3.txt");
    REQUIRE(in);
    std::stringstream golden;
    golden << in.rdbuf();
    CHECK(render(s) == golden.str());
}

TEST_CASE("input sets keep sample ids through slicing")
{
    const auto set = make_synthetic_set(3, 4, 1);
    CHECK(set.size() == 12);
    const auto sub = set.slice(5, 4);
    CHECK(sub.size() == 4);
    CHECK(sub.ids[0] == set.ids[5]);
    CHECK(sub.labels[0] == set.labels[5]);
    CHECK(std::equal(sub.sample(0).begin(), sub.sample(0).end(), set.sample(5).begin()));
    CHECK_THROWS_AS((void)make_synthetic_set(0, 1, 1), Error);
}

TEST_CASE("synthetic classes use disjoint inputs")
{
    const auto set = make_synthetic_set(3, 2, 7);
    for (std::size_t i = 0; i < kInputCount; ++i)
    {
        int lit = 0;
        for (std::size_t c = 0; c < 3; ++c)
        {
            lit += set.sample(c)[i] > 0 ? 1 : 0;
        }
        CHECK(lit == 1);
    }
}
