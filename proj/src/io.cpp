#include "odinsim/io.hpp"

#include <fstream>
#include <system_error>

#include "odinsim/error.hpp"

namespace odinsim
{

void write_file_atomic(const std::filesystem::path &path, std::string_view contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
        {
            throw Error("cannot write " + path.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out)
        {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw Error("write failed for " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot rename into " + path.string());
    }
}

} // namespace odinsim
