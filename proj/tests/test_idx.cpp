#include <doctest.h>

#include <fstream>

#include "odinsim/error.hpp"
#include "odinsim/idx.hpp"
#include "support.hpp"

using namespace odinsim;

namespace
{

std::vector<std::uint8_t> header(std::uint8_t ndim, std::initializer_list<std::uint32_t> dims)
{
    std::vector<std::uint8_t> out{0x00, 0x00, 0x08, ndim};
    for (const auto d : dims)
    {
        out.push_back(static_cast<std::uint8_t>(d >> 24U));
        out.push_back(static_cast<std::uint8_t>(d >> 16U));
        out.push_back(static_cast<std::uint8_t>(d >> 8U));
        out.push_back(static_cast<std::uint8_t>(d));
    }
    return out;
}

std::size_t offset_of(const std::vector<std::uint8_t> &bytes)
{
    try
    {
        (void)parse_idx(bytes);
    }
    catch (const ParseError &e)
    {
        return e.offset();
    }
    FAIL("expected a parse error");
    return 0;
}

} // namespace

TEST_CASE("two 28x28 images")
{
    auto bytes = header(3, {2, 28, 28});
    for (std::size_t i = 0; i < 1568; ++i)
    {
        bytes.push_back(static_cast<std::uint8_t>(i));
    }
    const auto arr = parse_idx(bytes);
    CHECK(arr.dims == std::vector<std::uint32_t>{2, 28, 28});
    CHECK(arr.data.size() == 1568);
    const auto set = make_image_set(arr, std::nullopt);
    CHECK(set.size() == 2);
    CHECK(set.rows == 28);
    CHECK(set.image(1)[0] == static_cast<std::uint8_t>(784));
}

TEST_CASE("label file")
{
    auto bytes = header(1, {3});
    bytes.insert(bytes.end(), {7, 2, 1});
    const auto arr = parse_idx(bytes);
    CHECK(arr.data == std::vector<std::uint8_t>{7, 2, 1});

    auto images = header(3, {3, 2, 2});
    images.resize(images.size() + 12, 0);
    const auto set = make_image_set(parse_idx(images), arr);
    CHECK(set.labels == std::vector<std::uint8_t>{7, 2, 1});
}

TEST_CASE("malformed inputs name the failing offset")
{
    CHECK(offset_of({0x00, 0x00}) == 2);
    CHECK(offset_of({0x01, 0x00, 0x08, 0x01, 0, 0, 0, 0}) == 0);
    CHECK(offset_of({0x00, 0x00, 0x0D, 0x01, 0, 0, 0, 0}) == 2);

    auto truncated_dims = header(3, {2, 28});
    CHECK(offset_of(truncated_dims) >= 4);

    auto short_payload = header(1, {5});
    short_payload.insert(short_payload.end(), {1, 2, 3});
    CHECK(offset_of(short_payload) == 8 + 3);

    auto trailing = header(1, {1});
    trailing.insert(trailing.end(), {1, 2});
    CHECK(offset_of(trailing) == 9);
}

TEST_CASE("image and label counts must agree")
{
    auto images = header(3, {2, 2, 2});
    images.resize(images.size() + 8, 0);
    auto labels = header(1, {3});
    labels.insert(labels.end(), {0, 1, 2});
    CHECK_THROWS_AS((void)make_image_set(parse_idx(images), parse_idx(labels)), Error);
    CHECK_THROWS_AS((void)make_image_set(parse_idx(labels), std::nullopt), Error);
}

TEST_CASE("missing file is an error")
{
    CHECK_THROWS_AS((void)read_file("/nonexistent/odinsim/file"), Error);
}

TEST_CASE("MNIST test set has 10000 labelled 28x28 images")
{
    const auto dir = testing::mnist_dir();
    if (!dir)
    {
        MESSAGE("NN_DATA_DIR not set; skipping");
        return;
    }
    const auto f = mnist_files(*dir);
    const auto set = load_image_set(f.test_images, f.test_labels);
    CHECK(set.size() == 10000);
    CHECK(set.rows == 28);
    CHECK(set.cols == 28);
    CHECK(set.labels.size() == 10000);

    // Independent reader: dimension field straight from the header bytes.
    const auto raw = read_file(f.test_images);
    const std::uint32_t count = (std::uint32_t{raw[4]} << 24U) | (std::uint32_t{raw[5]} << 16U) |
                                (std::uint32_t{raw[6]} << 8U) | raw[7];
    CHECK(count == 10000);
    CHECK(raw.size() == 16 + 10000U * 784U);
    CHECK(set.labels[0] == 7);
    CHECK(set.labels[1] == 2);
    CHECK(set.labels[2] == 1);
}
