#ifndef ODINSIM_IDX_HPP
#define ODINSIM_IDX_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace odinsim
{

// Decoded IDX container (only the unsigned-byte element type is accepted).
struct IdxArray
{
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;
};

// Throws ParseError naming the offending byte offset.
[[nodiscard]] IdxArray parse_idx(std::span<const std::uint8_t> bytes);

struct ImageSet
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> pixels; // count * rows * cols, row-major
    std::vector<std::uint8_t> labels; // empty when loaded without a label file

    [[nodiscard]] std::size_t size() const noexcept
    {
        return rows * cols == 0 ? 0 : pixels.size() / (rows * cols);
    }
    [[nodiscard]] std::span<const std::uint8_t> image(std::size_t i) const noexcept
    {
        return {pixels.data() + i * rows * cols, rows * cols};
    }
};

[[nodiscard]] ImageSet make_image_set(IdxArray images, std::optional<IdxArray> labels);

[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path &path);

[[nodiscard]] ImageSet load_image_set(const std::filesystem::path &images,
                                      const std::filesystem::path &labels);

// Standard file names inside an MNIST directory.
struct MnistFiles
{
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;
};
[[nodiscard]] MnistFiles mnist_files(const std::filesystem::path &dir);

} // namespace odinsim

#endif // ODINSIM_IDX_HPP
