#include "odinsim/idx.hpp"

#include <fstream>
#include <iterator>
#include <string>

#include "odinsim/error.hpp"

namespace odinsim
{

namespace
{

constexpr std::uint8_t kUnsignedByte = 0x08;

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at)
{
    return (static_cast<std::uint32_t>(b[at]) << 24U) | (static_cast<std::uint32_t>(b[at + 1]) << 16U) |
           (static_cast<std::uint32_t>(b[at + 2]) << 8U) | static_cast<std::uint32_t>(b[at + 3]);
}

} // namespace

IdxArray parse_idx(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < 4)
    {
        throw ParseError("IDX header truncated", bytes.size());
    }
    if (bytes[0] != 0 || bytes[1] != 0)
    {
        throw ParseError("bad IDX magic: first two bytes must be zero", bytes[0] != 0 ? 0 : 1);
    }
    if (bytes[2] != kUnsignedByte)
    {
        throw ParseError("unsupported IDX element type " + std::to_string(bytes[2]), 2);
    }
    const std::size_t ndims = bytes[3];
    if (ndims == 0)
    {
        throw ParseError("IDX file declares zero dimensions", 3);
    }
    const std::size_t header = 4 + 4 * ndims;
    if (bytes.size() < header)
    {
        throw ParseError("IDX dimension table truncated", bytes.size());
    }

    IdxArray out;
    std::size_t expected = 1;
    for (std::size_t d = 0; d < ndims; ++d)
    {
        const auto n = read_be32(bytes, 4 + 4 * d);
        out.dims.push_back(n);
        expected *= n;
    }
    const std::size_t payload = bytes.size() - header;
    if (payload < expected)
    {
        throw ParseError("IDX payload truncated: need " + std::to_string(expected) + " bytes, have " +
                             std::to_string(payload),
                         bytes.size());
    }
    if (payload > expected)
    {
        throw ParseError("IDX payload has " + std::to_string(payload - expected) + " trailing bytes",
                         header + expected);
    }
    out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
    return out;
}

ImageSet make_image_set(IdxArray images, std::optional<IdxArray> labels)
{
    if (images.dims.size() != 3)
    {
        throw ParseError("image file must have 3 dimensions, found " + std::to_string(images.dims.size()), 3);
    }
    ImageSet set;
    set.rows = images.dims[1];
    set.cols = images.dims[2];
    set.pixels = std::move(images.data);
    if (labels)
    {
        if (labels->dims.size() != 1)
        {
            throw ParseError("label file must have 1 dimension, found " + std::to_string(labels->dims.size()), 3);
        }
        if (labels->dims[0] != images.dims[0])
        {
            // offset 4: the count field of the label file
            throw ParseError("label count " + std::to_string(labels->dims[0]) + " does not match image count " +
                                 std::to_string(images.dims[0]),
                             4);
        }
        set.labels = std::move(labels->data);
    }
    return set;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw Error("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ImageSet load_image_set(const std::filesystem::path &images, const std::filesystem::path &labels)
{
    try
    {
        auto img = parse_idx(read_file(images));
        auto lab = parse_idx(read_file(labels));
        return make_image_set(std::move(img), std::move(lab));
    }
    catch (const ParseError &e)
    {
        throw Error(images.filename().string() + "/" + labels.filename().string() + ": " + e.what());
    }
}

MnistFiles mnist_files(const std::filesystem::path &dir)
{
    return {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", dir / "t10k-images-idx3-ubyte",
            dir / "t10k-labels-idx1-ubyte"};
}

} // namespace odinsim
