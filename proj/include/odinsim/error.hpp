#ifndef ODINSIM_ERROR_HPP
#define ODINSIM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odinsim
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Raised by binary readers (IDX, dump files). offset is the byte position at
// which the input stopped making sense.
class ParseError : public Error
{
public:
    ParseError(const std::string &what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")")
        , offset_(offset)
    {
    }

    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace odinsim

#endif // ODINSIM_ERROR_HPP
