#ifndef ODINSIM_FAULTSIM_HPP
#define ODINSIM_FAULTSIM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "odinsim/rng.hpp"
#include "odinsim/synaptic_memory.hpp"

namespace odinsim
{

enum class FaultScope
{
    full_memory,
    relevant_bits,
};

[[nodiscard]] std::string to_string(FaultScope scope);
[[nodiscard]] FaultScope parse_scope(const std::string &text);

// Reference mean times to upset measured under the neutron beam.
constexpr double kReferenceMttuRelevantS = 1185.0;
constexpr double kReferenceMttuFullS = 46.0;
constexpr double kReferenceSigmaCm2 = 4.17e-9;

struct FaultModel
{
    double sigma = kReferenceSigmaCm2; // cm^2
    double flux = 0.0;                 // particles / cm^2 / s
    double eta = 10240.0 / 262144.0;
    FaultScope scope = FaultScope::relevant_bits;
    std::uint64_t seed = 0;
    // When positive, the mean time to upset for the chosen scope; sigma and
    // flux are then ignored.
    double mttu_s = kReferenceMttuRelevantS;

    void validate() const;
};

// Events per second over the model's scope.
[[nodiscard]] double upset_rate(const FaultModel &model);
// 1 / rate, or +inf when the rate is zero.
[[nodiscard]] double mean_time_to_upset(const FaultModel &model);

// The set of bit positions a scope may hit. For relevant_bits these are the
// records of the enabled columns 0 .. n_outputs-1.
struct BitScope
{
    std::size_t n_pre = 256;
    std::size_t n_post = 256;
    std::size_t n_outputs = 10;
    FaultScope scope = FaultScope::relevant_bits;

    [[nodiscard]] std::size_t size() const noexcept;
    // k-th bit of the scope as a flat memory index, k < size().
    [[nodiscard]] std::uint64_t bit(std::size_t k) const noexcept;
    [[nodiscard]] bool contains(std::uint64_t flat_index) const noexcept;
};

struct Upset
{
    double time_s = 0.0;
    std::uint64_t bit = 0;
};

// Poisson(rate * duration) events, uniform in time and over the scope,
// sorted by time.
[[nodiscard]] std::vector<Upset> schedule_upsets(const FaultModel &model, const BitScope &scope, double duration_s,
                                                 SplitMix64 &rng);

void apply_flip(SynapticMemory &memory, std::uint64_t flat_index);

// Stream for one injection period of one run; independent of every other
// random stream in the simulator.
[[nodiscard]] SplitMix64 fault_stream(const FaultModel &model, std::uint64_t run_seed, std::uint64_t period);

// Three replicas with bitwise majority voting.
class TmrMemory
{
public:
    explicit TmrMemory(const SynapticMemory &memory);

    [[nodiscard]] const SynapticMemory &replica(std::size_t r) const { return replicas_.at(r); }
    [[nodiscard]] SynapticMemory &replica(std::size_t r) { return replicas_.at(r); }

    [[nodiscard]] bool read(std::uint64_t flat_index) const;
    [[nodiscard]] SynapticMemory voted() const;
    void scrub();
    [[nodiscard]] bool consistent() const;

private:
    std::array<SynapticMemory, 3> replicas_;
};

struct InjectionEvent
{
    double time_s = 0.0;
    std::uint64_t bit = 0;
    std::size_t pre = 0;
    std::size_t post = 0;
    std::size_t offset = 0;
    int replica = -1; // -1 for unprotected memory
};

struct InjectionResult
{
    std::size_t flips = 0;
    std::vector<InjectionEvent> events;
};

// Schedules period_hours of upsets and applies them in time order.
InjectionResult inject_period(SynapticMemory &memory, const FaultModel &model, const BitScope &scope,
                              double period_hours, SplitMix64 &rng);

// TMR variant: each upset lands on a uniformly chosen replica. The replicas
// are scrubbed whenever an event crosses a multiple of scrub_interval_s, and
// once more at the end of the period. scrub_interval_s <= 0 scrubs only at
// the end.
InjectionResult inject_period(TmrMemory &memory, const FaultModel &model, const BitScope &scope, double period_hours,
                              double scrub_interval_s, SplitMix64 &rng);

void write_events_csv_header(std::ostream &out);
void write_events_csv(std::ostream &out, const std::vector<InjectionEvent> &events, std::uint64_t run_seed,
                      std::size_t period);

} // namespace odinsim

#endif // ODINSIM_FAULTSIM_HPP
