#ifndef ODINSIM_PLASTICITY_HPP
#define ODINSIM_PLASTICITY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "odinsim/encoding.hpp"
#include "odinsim/network.hpp"
#include "odinsim/sdsp.hpp"

namespace odinsim
{

enum class LearningMode
{
    unsupervised,
    teacher,
};

// Streams every sample once with SDSP enabled. In teacher mode the neuron
// mapped to the sample's label gets params.teacher_current on every step.
// Samples are processed in order; the result depends on that order.
void learning_epoch(Network &net, const InputSet &data, const SdspParams &params, LearningMode mode,
                    std::uint64_t seed);

struct LabelAssignment
{
    std::vector<int> label_map;
    std::vector<std::size_t> silent; // neurons that never spiked (mapped to class 0)
};

// Maps each enabled neuron to the class whose samples it wins most often,
// relative to class frequency (ties -> lower class id). A neuron that spikes
// but never wins falls back to its highest mean spike count per class; one
// that never spikes maps to class 0 and is listed in `silent`. The subset must
// contain every class in [0, n_classes).
[[nodiscard]] LabelAssignment assign_labels(const Network &net, const InputSet &subset, std::uint64_t seed,
                                            std::size_t n_classes = 10);

struct PretrainOptions
{
    std::size_t passes = 3;
    std::uint8_t initial_weight = 0;
    std::uint64_t seed = 1;
};

// Builds the healthy baseline: all enabled columns mapped at the initial
// weight, teacher-mode SDSP passes over `train`, then label assignment on it.
LabelAssignment pretrain(Network &net, const InputSet &train, const SdspParams &params, const PretrainOptions &opt);

} // namespace odinsim

#endif // ODINSIM_PLASTICITY_HPP
