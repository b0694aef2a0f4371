#ifndef ODINSIM_ANALYSIS_HPP
#define ODINSIM_ANALYSIS_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace odinsim
{

// sigma = errors / fluence, in cm^2 when fluence is in particles/cm^2.
[[nodiscard]] double cross_section(double n_errors, double fluence);

// Share of the crossbar whose bits belong to enabled neurons.
[[nodiscard]] double relevant_fraction(std::size_t enabled_neurons, std::size_t n_pre, std::size_t bits_per_entry,
                                       std::size_t total_bits);

struct FluenceEntry
{
    std::string name;
    double runtime_s = 0.0;
    double fluence = 0.0; // particles / cm^2
};

struct FluenceRow
{
    FluenceEntry entry;
    double flux = 0.0; // particles / cm^2 / s
};

[[nodiscard]] std::vector<FluenceRow> fluence_report(const std::vector<FluenceEntry> &ledger);

// The three irradiated configurations: 6k inference only, 6k with learning,
// 60k with learning.
[[nodiscard]] std::vector<FluenceEntry> reference_ledger();

// "H:MM" or plain seconds.
[[nodiscard]] double parse_runtime(const std::string &text);
[[nodiscard]] std::string format_runtime(double seconds);

// Scientific notation with `digits` significant figures and a bare exponent,
// e.g. 4.17e-9. Zero prints as "0".
[[nodiscard]] std::string format_sig(double value, int digits = 3);

} // namespace odinsim

#endif // ODINSIM_ANALYSIS_HPP
