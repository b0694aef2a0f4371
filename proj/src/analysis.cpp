#include "odinsim/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "odinsim/error.hpp"

namespace odinsim
{

double cross_section(double n_errors, double fluence)
{
    if (!(fluence > 0.0))
    {
        throw Error("cross section: fluence must be positive");
    }
    if (!(n_errors >= 0.0))
    {
        throw Error("cross section: error count must be non-negative");
    }
    return n_errors / fluence;
}

double relevant_fraction(std::size_t enabled_neurons, std::size_t n_pre, std::size_t bits_per_entry,
                         std::size_t total_bits)
{
    if (enabled_neurons == 0 || n_pre == 0 || bits_per_entry == 0 || total_bits == 0)
    {
        throw Error("relevant fraction: counts must be positive");
    }
    return static_cast<double>(n_pre * enabled_neurons * bits_per_entry) / static_cast<double>(total_bits);
}

std::vector<FluenceRow> fluence_report(const std::vector<FluenceEntry> &ledger)
{
    std::vector<FluenceRow> rows;
    rows.reserve(ledger.size());
    for (const auto &e : ledger)
    {
        if (!(e.runtime_s > 0.0) || !(e.fluence >= 0.0))
        {
            throw Error("fluence ledger entry '" + e.name + "' needs runtime > 0 and fluence >= 0");
        }
        rows.push_back({e, e.fluence / e.runtime_s});
    }
    return rows;
}

std::vector<FluenceEntry> reference_ledger()
{
    return {
        {"6k_inference", 7 * 3600.0 + 10 * 60.0, 1.18e11},
        {"6k_learning", 7 * 3600.0 + 10 * 60.0, 1.14e11},
        {"60k_learning", 27 * 3600.0 + 37 * 60.0, 4.03e11},
    };
}

double parse_runtime(const std::string &text)
{
    const auto colon = text.find(':');
    char *end = nullptr;
    if (colon == std::string::npos)
    {
        const double s = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0')
        {
            throw Error("bad runtime '" + text + "'");
        }
        return s;
    }
    const std::string h = text.substr(0, colon);
    const std::string m = text.substr(colon + 1);
    const long hours = std::strtol(h.c_str(), &end, 10);
    if (h.empty() || *end != '\0')
    {
        throw Error("bad runtime '" + text + "'");
    }
    const long minutes = std::strtol(m.c_str(), &end, 10);
    if (m.empty() || *end != '\0' || minutes < 0 || minutes >= 60 || hours < 0)
    {
        throw Error("bad runtime '" + text + "'");
    }
    return static_cast<double>(hours) * 3600.0 + static_cast<double>(minutes) * 60.0;
}

std::string format_runtime(double seconds)
{
    const auto minutes = static_cast<long>(std::llround(seconds / 60.0));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%ld:%02ld", minutes / 60, minutes % 60);
    return buf;
}

std::string format_sig(double value, int digits)
{
    if (value == 0.0)
    {
        return "0";
    }
    if (!std::isfinite(value))
    {
        return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, value);
    std::string s(buf);
    const auto e = s.find('e');
    const std::string mantissa = s.substr(0, e);
    const int exponent = std::atoi(s.c_str() + e + 1);
    return mantissa + "e" + std::to_string(exponent);
}

} // namespace odinsim
