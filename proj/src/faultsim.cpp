#include "odinsim/faultsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "odinsim/error.hpp"

namespace odinsim
{

std::string to_string(FaultScope scope)
{
    return scope == FaultScope::full_memory ? "full" : "relevant";
}

FaultScope parse_scope(const std::string &text)
{
    if (text == "full" || text == "full_memory")
    {
        return FaultScope::full_memory;
    }
    if (text == "relevant" || text == "relevant_bits")
    {
        return FaultScope::relevant_bits;
    }
    throw Error("unknown fault scope '" + text + "' (expected full or relevant)");
}

void FaultModel::validate() const
{
    if (!(sigma >= 0.0) || !(flux >= 0.0) || !std::isfinite(sigma) || !std::isfinite(flux))
    {
        throw Error("fault model: sigma and flux must be finite and non-negative");
    }
    if (!(eta > 0.0 && eta <= 1.0))
    {
        throw Error("fault model: eta must be in (0, 1]");
    }
    if (!(mttu_s >= 0.0))
    {
        throw Error("fault model: mttu_s must be non-negative");
    }
}

double upset_rate(const FaultModel &model)
{
    model.validate();
    if (model.mttu_s > 0.0)
    {
        return std::isinf(model.mttu_s) ? 0.0 : 1.0 / model.mttu_s;
    }
    const double r = model.sigma * model.flux;
    return model.scope == FaultScope::relevant_bits ? r * model.eta : r;
}

double mean_time_to_upset(const FaultModel &model)
{
    const double r = upset_rate(model);
    return r > 0.0 ? 1.0 / r : std::numeric_limits<double>::infinity();
}

std::size_t BitScope::size() const noexcept
{
    const std::size_t cols = scope == FaultScope::relevant_bits ? std::min(n_outputs, n_post) : n_post;
    return n_pre * cols * kBitsPerEntry;
}

std::uint64_t BitScope::bit(std::size_t k) const noexcept
{
    if (scope == FaultScope::full_memory)
    {
        return k;
    }
    const std::size_t cols = std::min(n_outputs, n_post);
    const std::size_t row_bits = cols * kBitsPerEntry;
    const std::size_t pre = k / row_bits;
    const std::size_t rest = k % row_bits;
    return (pre * n_post + rest / kBitsPerEntry) * kBitsPerEntry + rest % kBitsPerEntry;
}

bool BitScope::contains(std::uint64_t flat_index) const noexcept
{
    if (flat_index >= n_pre * n_post * kBitsPerEntry)
    {
        return false;
    }
    if (scope == FaultScope::full_memory)
    {
        return true;
    }
    const std::size_t post = (flat_index / kBitsPerEntry) % n_post;
    return post < n_outputs;
}

std::vector<Upset> schedule_upsets(const FaultModel &model, const BitScope &scope, double duration_s,
                                   SplitMix64 &rng)
{
    if (!(duration_s >= 0.0))
    {
        throw Error("schedule_upsets: duration must be non-negative");
    }
    const double mean = upset_rate(model) * duration_s;
    std::vector<Upset> out;
    if (mean <= 0.0 || scope.size() == 0)
    {
        return out;
    }
    std::poisson_distribution<std::uint64_t> count_dist(mean);
    const std::uint64_t n = count_dist(rng);
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
    {
        const double t = rng.uniform() * duration_s;
        out.push_back({t, scope.bit(rng.below(scope.size()))});
    }
    std::stable_sort(out.begin(), out.end(), [](const Upset &a, const Upset &b) { return a.time_s < b.time_s; });
    return out;
}

void apply_flip(SynapticMemory &memory, std::uint64_t flat_index)
{
    memory.flip_bit(flat_index);
}

SplitMix64 fault_stream(const FaultModel &model, std::uint64_t run_seed, std::uint64_t period)
{
    return SplitMix64(hash_keys({stream::fault, model.seed, run_seed, period}));
}

TmrMemory::TmrMemory(const SynapticMemory &memory) : replicas_{memory, memory, memory} {}

bool TmrMemory::read(std::uint64_t flat_index) const
{
    const int votes = static_cast<int>(replicas_[0].bit(flat_index)) + static_cast<int>(replicas_[1].bit(flat_index)) +
                      static_cast<int>(replicas_[2].bit(flat_index));
    return votes >= 2;
}

SynapticMemory TmrMemory::voted() const
{
    SynapticMemory out = replicas_[0];
    auto o = out.bytes();
    const auto a = replicas_[0].bytes();
    const auto b = replicas_[1].bytes();
    const auto c = replicas_[2].bytes();
    for (std::size_t i = 0; i < o.size(); ++i)
    {
        o[i] = static_cast<std::uint8_t>((a[i] & b[i]) | (a[i] & c[i]) | (b[i] & c[i]));
    }
    return out;
}

void TmrMemory::scrub()
{
    const SynapticMemory v = voted();
    replicas_.fill(v);
}

bool TmrMemory::consistent() const
{
    return replicas_[0] == replicas_[1] && replicas_[1] == replicas_[2];
}

namespace
{

InjectionEvent describe(const SynapticMemory &memory, const Upset &u, int replica)
{
    const auto a = memory.address(u.bit);
    return {u.time_s, u.bit, a.pre, a.post, a.offset, replica};
}

} // namespace

InjectionResult inject_period(SynapticMemory &memory, const FaultModel &model, const BitScope &scope,
                              double period_hours, SplitMix64 &rng)
{
    InjectionResult r;
    for (const auto &u : schedule_upsets(model, scope, period_hours * 3600.0, rng))
    {
        apply_flip(memory, u.bit);
        r.events.push_back(describe(memory, u, -1));
    }
    r.flips = r.events.size();
    return r;
}

InjectionResult inject_period(TmrMemory &memory, const FaultModel &model, const BitScope &scope, double period_hours,
                              double scrub_interval_s, SplitMix64 &rng)
{
    InjectionResult r;
    const auto upsets = schedule_upsets(model, scope, period_hours * 3600.0, rng);
    std::uint64_t window = 0;
    for (const auto &u : upsets)
    {
        if (scrub_interval_s > 0.0)
        {
            const auto w = static_cast<std::uint64_t>(u.time_s / scrub_interval_s);
            if (w != window)
            {
                memory.scrub();
                window = w;
            }
        }
        const int replica = static_cast<int>(rng.below(3));
        apply_flip(memory.replica(static_cast<std::size_t>(replica)), u.bit);
        r.events.push_back(describe(memory.replica(0), u, replica));
    }
    memory.scrub();
    r.flips = r.events.size();
    return r;
}

void write_events_csv_header(std::ostream &out)
{
    out << "seed,period,time_s,bit_index,pre,post,offset,replica\n";
}

void write_events_csv(std::ostream &out, const std::vector<InjectionEvent> &events, std::uint64_t run_seed,
                      std::size_t period)
{
    char buf[64];
    for (const auto &e : events)
    {
        std::snprintf(buf, sizeof buf, "%.17g", e.time_s);
        out << run_seed << ',' << period << ',' << buf << ',' << e.bit << ',' << e.pre << ',' << e.post << ','
            << e.offset << ',' << e.replica << '\n';
    }
}

} // namespace odinsim
