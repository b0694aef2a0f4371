#include "odinsim/campaign.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>

#include "odinsim/error.hpp"
#include "odinsim/idx.hpp"
#include "odinsim/io.hpp"
#include "odinsim/plasticity.hpp"
#include "odinsim/rng.hpp"
#include "odinsim/stats.hpp"

namespace odinsim
{

void CampaignConfig::validate() const
{
    if (!(period_hours >= 0.0))
    {
        throw Error("campaign: period_hours must be non-negative");
    }
    if (n_seeds == 0)
    {
        throw Error("campaign: n_seeds must be at least 1");
    }
    if (!(scrub_interval_s >= 0.0))
    {
        throw Error("campaign: scrub_interval_s must be non-negative");
    }
}

namespace
{

BitScope scope_of(const Network &net, const FaultModel &model)
{
    return {net.memory.n_pre(), net.memory.n_post(), net.config.n_outputs, model.scope};
}

} // namespace

RunLog run_seed(const Network &baseline, const FaultModel &model, const CampaignConfig &config,
                const CampaignData &data, std::uint64_t seed, std::uint64_t config_hash, const EventSink &sink)
{
    if (data.eval == nullptr || data.eval->empty())
    {
        throw Error("campaign: evaluation set is missing or empty");
    }
    if (config.learning && (data.epoch == nullptr || data.epoch->empty()))
    {
        throw Error("campaign: learning is enabled but the epoch set is missing or empty");
    }
    if (baseline.label_map.size() != baseline.config.n_outputs)
    {
        throw Error("campaign: baseline network has no label map");
    }

    RunLog log;
    log.seed = seed;
    log.config_hash = config_hash;

    Network net = baseline;
    TmrMemory tmr(net.memory);
    const BitScope scope = scope_of(net, model);
    const double scrub_s = config.scrub_interval_s > 0.0
                               ? config.scrub_interval_s
                               : config.period_hours * 3600.0 / static_cast<double>(data.eval->size());

    log.records.push_back({0, 0.0, 0, 0, evaluate(net, *data.eval, config.eval_seed).accuracy(), false});
    std::size_t cumulative = 0;
    for (std::size_t p = 1; p <= config.n_periods; ++p)
    {
        auto rng = fault_stream(model, seed, p);
        InjectionResult injected;
        if (config.tmr)
        {
            injected = inject_period(tmr, model, scope, config.period_hours, scrub_s, rng);
            net.memory = tmr.voted();
        }
        else
        {
            injected = inject_period(net.memory, model, scope, config.period_hours, rng);
        }
        if (sink)
        {
            sink(seed, p, injected);
        }
        cumulative += injected.flips;

        PeriodRecord rec;
        rec.period = p;
        rec.equivalent_hours = config.period_hours * static_cast<double>(p);
        rec.flips_injected = injected.flips;
        rec.cumulative_flips = cumulative;
        rec.accuracy = evaluate(net, *data.eval, config.eval_seed).accuracy();

        if (config.learning)
        {
            learning_epoch(net, *data.epoch, data.epoch_params, LearningMode::unsupervised,
                           hash_keys({stream::epoch, seed, p}));
            net.label_map =
                assign_labels(net, *data.epoch, hash_keys({stream::label, seed, p}), data.n_classes).label_map;
            if (config.tmr)
            {
                tmr = TmrMemory(net.memory);
            }
            rec.epoch_ran = true;
        }
        log.records.push_back(rec);
    }
    return log;
}

std::vector<RunLog> run_campaign(const Network &baseline, const FaultModel &model, const CampaignConfig &config,
                                 const CampaignData &data, std::uint64_t config_hash, const EventSink &sink)
{
    config.validate();
    std::vector<RunLog> logs(config.n_seeds);
    std::exception_ptr failure;
    const auto n = static_cast<std::int64_t>(config.n_seeds);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i)
    {
        try
        {
            logs[static_cast<std::size_t>(i)] = run_seed(baseline, model, config, data,
                                                         config.base_seed + static_cast<std::uint64_t>(i),
                                                         config_hash, sink);
        }
        catch (...)
        {
#pragma omp critical(odinsim_campaign_failure)
            if (!failure)
            {
                failure = std::current_exception();
            }
        }
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
    return logs;
}

std::vector<RunLog> run_campaign_serial(const Network &baseline, const FaultModel &model,
                                        const CampaignConfig &config, const CampaignData &data,
                                        std::uint64_t config_hash, const EventSink &sink)
{
    config.validate();
    std::vector<RunLog> logs;
    logs.reserve(config.n_seeds);
    for (std::size_t i = 0; i < config.n_seeds; ++i)
    {
        logs.push_back(run_seed(baseline, model, config, data, config.base_seed + i, config_hash, sink));
    }
    return logs;
}

const PeriodStats &Aggregate::end_of_run() const
{
    if (periods.empty())
    {
        throw Error("aggregate is empty");
    }
    return periods.back();
}

std::vector<double> accuracies_at(const std::vector<RunLog> &logs, std::size_t period)
{
    std::vector<double> out;
    out.reserve(logs.size());
    for (const auto &log : logs)
    {
        out.push_back(log.records.at(period).accuracy);
    }
    return out;
}

Aggregate aggregate(const std::vector<RunLog> &logs)
{
    Aggregate agg;
    if (logs.empty())
    {
        return agg;
    }
    const std::size_t n_rec = logs.front().records.size();
    for (const auto &log : logs)
    {
        if (log.records.size() != n_rec)
        {
            throw Error("aggregate: logs have different period counts");
        }
    }
    for (std::size_t k = 0; k < n_rec; ++k)
    {
        const auto acc = accuracies_at(logs, k);
        PeriodStats s;
        s.period = logs.front().records[k].period;
        s.equivalent_hours = logs.front().records[k].equivalent_hours;
        s.n = acc.size();
        s.min = *std::min_element(acc.begin(), acc.end());
        s.max = *std::max_element(acc.begin(), acc.end());
        s.mean = mean(acc);
        s.stddev = stddev(acc);
        agg.periods.push_back(s);
    }
    return agg;
}

namespace
{

constexpr const char *kRunsHeader =
    "seed,config_hash,period,equivalent_hours,flips_injected,cumulative_flips,accuracy,epoch_ran";
constexpr const char *kAggregateHeader = "period,equivalent_hours,n,min,mean,max,stddev";

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
    {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',')
    {
        out.emplace_back();
    }
    return out;
}

std::uint64_t to_u64(const std::string &s, int base, std::size_t line)
{
    char *end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, base);
    if (s.empty() || *end != '\0')
    {
        throw Error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
    return v;
}

double to_double(const std::string &s, std::size_t line)
{
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0')
    {
        throw Error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

template <typename Row>
void for_each_row(const std::string &text, const char *header, std::size_t n_fields, Row &&row)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header)
    {
        throw Error("csv header mismatch (expected '" + std::string(header) + "')");
    }
    std::size_t no = 1;
    while (std::getline(in, line))
    {
        ++no;
        if (line.empty())
        {
            continue;
        }
        const auto f = split(line);
        if (f.size() != n_fields)
        {
            throw Error("csv line " + std::to_string(no) + ": expected " + std::to_string(n_fields) + " fields");
        }
        row(f, no);
    }
}

} // namespace

std::string runs_csv(const std::vector<RunLog> &logs)
{
    std::string out = std::string(kRunsHeader) + "\n";
    for (const auto &log : logs)
    {
        for (const auto &r : log.records)
        {
            out += std::to_string(log.seed) + "," + hex64(log.config_hash) + "," + std::to_string(r.period) + "," +
                   num(r.equivalent_hours) + "," + std::to_string(r.flips_injected) + "," +
                   std::to_string(r.cumulative_flips) + "," + num(r.accuracy) + "," + (r.epoch_ran ? "1" : "0") +
                   "\n";
        }
    }
    return out;
}

std::string aggregate_csv(const Aggregate &agg)
{
    std::string out = std::string(kAggregateHeader) + "\n";
    for (const auto &s : agg.periods)
    {
        out += std::to_string(s.period) + "," + num(s.equivalent_hours) + "," + std::to_string(s.n) + "," +
               num(s.min) + "," + num(s.mean) + "," + num(s.max) + "," + num(s.stddev) + "\n";
    }
    return out;
}

std::vector<RunLog> parse_runs_csv(const std::string &text)
{
    std::vector<RunLog> logs;
    for_each_row(text, kRunsHeader, 8, [&](const std::vector<std::string> &f, std::size_t no) {
        const auto seed = to_u64(f[0], 10, no);
        const auto hash = to_u64(f[1], 16, no);
        if (logs.empty() || logs.back().seed != seed)
        {
            logs.push_back({seed, hash, {}});
        }
        PeriodRecord r;
        r.period = to_u64(f[2], 10, no);
        r.equivalent_hours = to_double(f[3], no);
        r.flips_injected = to_u64(f[4], 10, no);
        r.cumulative_flips = to_u64(f[5], 10, no);
        r.accuracy = to_double(f[6], no);
        r.epoch_ran = to_u64(f[7], 10, no) != 0;
        logs.back().records.push_back(r);
    });
    return logs;
}

Aggregate parse_aggregate_csv(const std::string &text)
{
    Aggregate agg;
    for_each_row(text, kAggregateHeader, 7, [&](const std::vector<std::string> &f, std::size_t no) {
        agg.periods.push_back({to_u64(f[0], 10, no), to_double(f[1], no), to_u64(f[2], 10, no), to_double(f[3], no),
                               to_double(f[4], no), to_double(f[5], no), to_double(f[6], no)});
    });
    return agg;
}

void export_csv(const std::filesystem::path &path, const std::vector<RunLog> &logs)
{
    write_file_atomic(path, runs_csv(logs));
}

void export_csv(const std::filesystem::path &path, const Aggregate &agg)
{
    write_file_atomic(path, aggregate_csv(agg));
}

namespace
{

std::string read_text(const std::filesystem::path &path)
{
    const auto bytes = read_file(path);
    return {bytes.begin(), bytes.end()};
}

} // namespace

std::vector<RunLog> import_runs_csv(const std::filesystem::path &path)
{
    return parse_runs_csv(read_text(path));
}

Aggregate import_aggregate_csv(const std::filesystem::path &path)
{
    return parse_aggregate_csv(read_text(path));
}

} // namespace odinsim
