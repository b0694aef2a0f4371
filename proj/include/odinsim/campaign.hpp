#ifndef ODINSIM_CAMPAIGN_HPP
#define ODINSIM_CAMPAIGN_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "odinsim/encoding.hpp"
#include "odinsim/faultsim.hpp"
#include "odinsim/network.hpp"
#include "odinsim/sdsp.hpp"

namespace odinsim
{

struct CampaignConfig
{
    double period_hours = 120.0;
    std::size_t n_periods = 7;
    bool learning = false;
    bool tmr = false;
    std::size_t n_seeds = 45;
    std::uint64_t base_seed = 1;
    std::uint64_t eval_seed = 7; // spike-train seed of the evaluation set
    // TMR scrub cadence in seconds of exposure; 0 scrubs once per evaluated
    // sample, i.e. period length / eval set size.
    double scrub_interval_s = 0.0;

    [[nodiscard]] double horizon_hours() const noexcept { return period_hours * static_cast<double>(n_periods); }
    void validate() const;
};

struct PeriodRecord
{
    std::size_t period = 0;
    double equivalent_hours = 0.0;
    std::size_t flips_injected = 0;
    std::size_t cumulative_flips = 0;
    double accuracy = 0.0;
    bool epoch_ran = false;

    friend bool operator==(const PeriodRecord &, const PeriodRecord &) = default;
};

struct RunLog
{
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::vector<PeriodRecord> records;

    friend bool operator==(const RunLog &, const RunLog &) = default;
};

// Datasets and learning parameters shared by every run of a campaign.
struct CampaignData
{
    const InputSet *eval = nullptr;
    const InputSet *epoch = nullptr; // labeled; also used for re-labeling
    SdspParams epoch_params;
    std::size_t n_classes = 10;
};

// Receives each period's injected events (for CSV logging). Called from the
// thread running that seed.
using EventSink = std::function<void(std::uint64_t seed, std::size_t period, const InjectionResult &)>;

// One seed: clone the baseline, log period 0, then per period inject,
// evaluate and, with learning on, run an unsupervised epoch and re-label.
[[nodiscard]] RunLog run_seed(const Network &baseline, const FaultModel &model, const CampaignConfig &config,
                              const CampaignData &data, std::uint64_t seed, std::uint64_t config_hash,
                              const EventSink &sink = {});

// Seeds base_seed .. base_seed + n_seeds - 1, one OpenMP task per seed.
// Logs come back in seed order.
[[nodiscard]] std::vector<RunLog> run_campaign(const Network &baseline, const FaultModel &model,
                                               const CampaignConfig &config, const CampaignData &data,
                                               std::uint64_t config_hash, const EventSink &sink = {});
// Single-threaded reference.
[[nodiscard]] std::vector<RunLog> run_campaign_serial(const Network &baseline, const FaultModel &model,
                                                      const CampaignConfig &config, const CampaignData &data,
                                                      std::uint64_t config_hash, const EventSink &sink = {});

struct PeriodStats
{
    std::size_t period = 0;
    double equivalent_hours = 0.0;
    std::size_t n = 0;
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
    double stddev = 0.0;

    friend bool operator==(const PeriodStats &, const PeriodStats &) = default;
};

struct Aggregate
{
    std::vector<PeriodStats> periods;

    [[nodiscard]] const PeriodStats &end_of_run() const;
    friend bool operator==(const Aggregate &, const Aggregate &) = default;
};

[[nodiscard]] Aggregate aggregate(const std::vector<RunLog> &logs);

// Accuracy of every log at one period, in log order.
[[nodiscard]] std::vector<double> accuracies_at(const std::vector<RunLog> &logs, std::size_t period);

// CSV text, one row per (seed, period), ordered by seed then period.
[[nodiscard]] std::string runs_csv(const std::vector<RunLog> &logs);
[[nodiscard]] std::string aggregate_csv(const Aggregate &agg);
[[nodiscard]] std::vector<RunLog> parse_runs_csv(const std::string &text);
[[nodiscard]] Aggregate parse_aggregate_csv(const std::string &text);

void export_csv(const std::filesystem::path &path, const std::vector<RunLog> &logs);
void export_csv(const std::filesystem::path &path, const Aggregate &agg);
[[nodiscard]] std::vector<RunLog> import_runs_csv(const std::filesystem::path &path);
[[nodiscard]] Aggregate import_aggregate_csv(const std::filesystem::path &path);

} // namespace odinsim

#endif // ODINSIM_CAMPAIGN_HPP
