#ifndef ODINSIM_CONFIG_HPP
#define ODINSIM_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "odinsim/analysis.hpp"
#include "odinsim/campaign.hpp"
#include "odinsim/faultsim.hpp"
#include "odinsim/network.hpp"
#include "odinsim/plasticity.hpp"
#include "odinsim/sdsp.hpp"

namespace odinsim
{

// Datasets are index ranges into the MNIST files: pretraining and the
// per-period epochs draw from the training images, evaluation from t10k.
struct DataRanges
{
    std::size_t train_offset = 0;
    std::size_t train_count = 6000;
    std::size_t epoch_offset = 6000;
    std::size_t epoch_count = 6000;
    std::size_t eval_offset = 0;
    std::size_t eval_count = 10000;
};

struct SimConfig
{
    NetworkConfig network;
    SdspParams sdsp;       // teacher pretraining
    SdspParams epoch_sdsp; // unsupervised per-period epochs
    PretrainOptions pretrain;
    DataRanges data;
    FaultModel fault;
    CampaignConfig campaign;
    std::vector<FluenceEntry> ledger = reference_ledger();

    SimConfig();
    void validate() const;
};

// Applies one key=value setting; unknown keys and malformed values throw.
void apply_setting(SimConfig &config, std::string_view key, std::string_view value);

// Flat key=value text. '#' starts a comment; blank lines are ignored.
// Errors name the offending line.
[[nodiscard]] SimConfig parse_config(std::string_view text, SimConfig base = SimConfig{});
[[nodiscard]] SimConfig load_config(const std::filesystem::path &path);

// Every key with its current value, one per line, in a fixed order.
[[nodiscard]] std::string to_config_text(const SimConfig &config);
// FNV-1a of to_config_text().
[[nodiscard]] std::uint64_t config_hash(const SimConfig &config);

// All recognised keys, in to_config_text() order.
[[nodiscard]] std::vector<std::string> config_keys();

} // namespace odinsim

#endif // ODINSIM_CONFIG_HPP
