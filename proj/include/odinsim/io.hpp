#ifndef ODINSIM_IO_HPP
#define ODINSIM_IO_HPP

#include <filesystem>
#include <string_view>

namespace odinsim
{

// Writes to "<path>.tmp" and renames it over path, so a failed run never
// leaves a partial file behind.
void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

} // namespace odinsim

#endif // ODINSIM_IO_HPP
