#ifndef ODINSIM_TESTS_SUPPORT_HPP
#define ODINSIM_TESTS_SUPPORT_HPP

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "odinsim/encoding.hpp"
#include "odinsim/idx.hpp"

namespace testing
{

inline std::optional<std::filesystem::path> mnist_dir()
{
    const char *env = std::getenv("NN_DATA_DIR");
    if (env == nullptr || *env == '\0')
    {
        return std::nullopt;
    }
    const std::filesystem::path dir(env);
    if (!std::filesystem::exists(odinsim::mnist_files(dir).test_images))
    {
        return std::nullopt;
    }
    return dir;
}

inline std::filesystem::path temp_dir(const std::string &name)
{
    auto p = std::filesystem::temp_directory_path() / ("odinsim_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace testing

#endif // ODINSIM_TESTS_SUPPORT_HPP
