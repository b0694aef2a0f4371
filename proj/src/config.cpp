#include "odinsim/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "odinsim/error.hpp"
#include "odinsim/idx.hpp"

namespace odinsim
{

SimConfig::SimConfig()
{
    epoch_sdsp.theta_up = 24;
    epoch_sdsp.ca_low = 15;
    epoch_sdsp.ca_down_high = 15;
    epoch_sdsp.ca_up_high = 15;
    epoch_sdsp.teacher_current = 0;
    epoch_sdsp.teacher_inhibit = 0;
}

void SimConfig::validate() const
{
    network.validate();
    if (!sdsp.valid() || !epoch_sdsp.valid())
    {
        throw Error("sdsp: calcium thresholds must satisfy ca_low <= ca_down_high <= ca_up_high");
    }
    if (pretrain.initial_weight > kWeightMax)
    {
        throw Error("pretrain.initial_weight must be in 0..7");
    }
    fault.validate();
    campaign.validate();
    for (const auto &e : ledger)
    {
        if (!(e.runtime_s > 0.0) || !(e.fluence >= 0.0))
        {
            throw Error("ledger." + e.name + ": runtime must be positive and fluence non-negative");
        }
    }
}

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char *expected)
{
    throw Error("bad value '" + std::string(value) + "' for " + std::string(key) + " (expected " + expected + ")");
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value)
{
    T v{};
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc{} || ptr != end)
    {
        bad_value(key, value, "an integer");
    }
    return v;
}

double parse_double(std::string_view key, std::string_view value)
{
    const std::string s(value);
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0')
    {
        bad_value(key, value, "a number");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "on" || value == "true" || value == "1" || value == "yes")
    {
        return true;
    }
    if (value == "off" || value == "false" || value == "0" || value == "no")
    {
        return false;
    }
    bad_value(key, value, "on/off");
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Field
{
    std::function<std::string(const SimConfig &)> get;
    std::function<void(SimConfig &, std::string_view key, std::string_view)> set;
};

template <typename T, typename Get>
Field integer_field(Get member)
{
    return {[member](const SimConfig &c) { return std::to_string(member(c)); },
            [member](SimConfig &c, std::string_view k, std::string_view v) { member(c) = parse_integer<T>(k, v); }};
}

template <typename Get>
Field double_field(Get member)
{
    return {[member](const SimConfig &c) { return fmt(member(c)); },
            [member](SimConfig &c, std::string_view k, std::string_view v) { member(c) = parse_double(k, v); }};
}

template <typename Get>
Field bool_field(Get member)
{
    return {[member](const SimConfig &c) { return std::string(member(c) ? "on" : "off"); },
            [member](SimConfig &c, std::string_view k, std::string_view v) { member(c) = parse_bool(k, v); }};
}

#define ODINSIM_REF(expr) [](auto &c) -> auto & { return expr; }

const std::vector<std::pair<std::string, Field>> &fields()
{
    static const std::vector<std::pair<std::string, Field>> table = {
        {"network.n_outputs", integer_field<std::size_t>(ODINSIM_REF(c.network.n_outputs))},
        {"network.threshold", integer_field<int>(ODINSIM_REF(c.network.threshold))},
        {"network.leak", integer_field<int>(ODINSIM_REF(c.network.leak))},
        {"network.refractory", integer_field<int>(ODINSIM_REF(c.network.refractory))},
        {"network.v_max", integer_field<int>(ODINSIM_REF(c.network.v_max))},
        {"network.ca_max", integer_field<int>(ODINSIM_REF(c.network.ca_max))},
        {"network.ca_leak_period", integer_field<int>(ODINSIM_REF(c.network.ca_leak_period))},
        {"network.steps", integer_field<std::size_t>(ODINSIM_REF(c.network.code.steps))},
        {"network.r_max", double_field(ODINSIM_REF(c.network.code.r_max))},

        {"sdsp.theta_up", integer_field<int>(ODINSIM_REF(c.sdsp.theta_up))},
        {"sdsp.ca_low", integer_field<int>(ODINSIM_REF(c.sdsp.ca_low))},
        {"sdsp.ca_down_high", integer_field<int>(ODINSIM_REF(c.sdsp.ca_down_high))},
        {"sdsp.ca_up_high", integer_field<int>(ODINSIM_REF(c.sdsp.ca_up_high))},
        {"sdsp.teacher_current", integer_field<int>(ODINSIM_REF(c.sdsp.teacher_current))},
        {"sdsp.teacher_inhibit", integer_field<int>(ODINSIM_REF(c.sdsp.teacher_inhibit))},

        {"epoch.theta_up", integer_field<int>(ODINSIM_REF(c.epoch_sdsp.theta_up))},
        {"epoch.ca_low", integer_field<int>(ODINSIM_REF(c.epoch_sdsp.ca_low))},
        {"epoch.ca_down_high", integer_field<int>(ODINSIM_REF(c.epoch_sdsp.ca_down_high))},
        {"epoch.ca_up_high", integer_field<int>(ODINSIM_REF(c.epoch_sdsp.ca_up_high))},

        {"pretrain.passes", integer_field<std::size_t>(ODINSIM_REF(c.pretrain.passes))},
        {"pretrain.initial_weight", integer_field<std::uint8_t>(ODINSIM_REF(c.pretrain.initial_weight))},
        {"pretrain.seed", integer_field<std::uint64_t>(ODINSIM_REF(c.pretrain.seed))},

        {"data.train_offset", integer_field<std::size_t>(ODINSIM_REF(c.data.train_offset))},
        {"data.train_count", integer_field<std::size_t>(ODINSIM_REF(c.data.train_count))},
        {"data.epoch_offset", integer_field<std::size_t>(ODINSIM_REF(c.data.epoch_offset))},
        {"data.epoch_count", integer_field<std::size_t>(ODINSIM_REF(c.data.epoch_count))},
        {"data.eval_offset", integer_field<std::size_t>(ODINSIM_REF(c.data.eval_offset))},
        {"data.eval_count", integer_field<std::size_t>(ODINSIM_REF(c.data.eval_count))},

        {"fault.sigma", double_field(ODINSIM_REF(c.fault.sigma))},
        {"fault.flux", double_field(ODINSIM_REF(c.fault.flux))},
        {"fault.eta", double_field(ODINSIM_REF(c.fault.eta))},
        {"fault.scope",
         {[](const SimConfig &c) { return to_string(c.fault.scope); },
          [](SimConfig &c, std::string_view, std::string_view v) { c.fault.scope = parse_scope(std::string(v)); }}},
        {"fault.seed", integer_field<std::uint64_t>(ODINSIM_REF(c.fault.seed))},
        {"fault.mttu_s", double_field(ODINSIM_REF(c.fault.mttu_s))},

        {"campaign.period_hours", double_field(ODINSIM_REF(c.campaign.period_hours))},
        {"campaign.n_periods", integer_field<std::size_t>(ODINSIM_REF(c.campaign.n_periods))},
        {"campaign.learning", bool_field(ODINSIM_REF(c.campaign.learning))},
        {"campaign.tmr", bool_field(ODINSIM_REF(c.campaign.tmr))},
        {"campaign.n_seeds", integer_field<std::size_t>(ODINSIM_REF(c.campaign.n_seeds))},
        {"campaign.base_seed", integer_field<std::uint64_t>(ODINSIM_REF(c.campaign.base_seed))},
        {"campaign.eval_seed", integer_field<std::uint64_t>(ODINSIM_REF(c.campaign.eval_seed))},
        {"campaign.scrub_interval_s", double_field(ODINSIM_REF(c.campaign.scrub_interval_s))},
    };
    return table;
}

#undef ODINSIM_REF

void set_ledger(SimConfig &c, const std::string &name, std::string_view value)
{
    const auto comma = value.find(',');
    if (name.empty() || comma == std::string_view::npos)
    {
        throw Error("ledger." + name + ": expected 'H:MM,fluence'");
    }
    const FluenceEntry e{name, parse_runtime(trim(value.substr(0, comma))),
                         parse_double("ledger." + name, trim(value.substr(comma + 1)))};
    for (auto &existing : c.ledger)
    {
        if (existing.name == name)
        {
            existing = e;
            return;
        }
    }
    c.ledger.push_back(e);
}

} // namespace

void apply_setting(SimConfig &config, std::string_view key, std::string_view value)
{
    const std::string k = trim(key);
    const std::string v = trim(value);
    if (k.rfind("ledger.", 0) == 0)
    {
        set_ledger(config, k.substr(7), v);
        return;
    }
    for (const auto &[name, field] : fields())
    {
        if (name == k)
        {
            field.set(config, k, v);
            return;
        }
    }
    throw Error("unknown config key '" + k + "'");
}

SimConfig parse_config(std::string_view text, SimConfig base)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
        {
            line = line.substr(0, hash);
        }
        if (trim(line).empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw Error("config line " + std::to_string(line_no) + ": expected key = value");
        }
        try
        {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        }
        catch (const Error &e)
        {
            throw Error("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

SimConfig load_config(const std::filesystem::path &path)
{
    const auto bytes = read_file(path);
    try
    {
        return parse_config(std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
    }
    catch (const Error &e)
    {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string to_config_text(const SimConfig &config)
{
    std::string out;
    for (const auto &[name, field] : fields())
    {
        out += name + " = " + field.get(config) + "\n";
    }
    for (const auto &e : config.ledger)
    {
        out += "ledger." + e.name + " = " + fmt(e.runtime_s) + "," + fmt(e.fluence) + "\n";
    }
    return out;
}

std::uint64_t config_hash(const SimConfig &config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : to_config_text(config))
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto &[name, field] : fields())
    {
        keys.push_back(name);
    }
    return keys;
}

} // namespace odinsim
