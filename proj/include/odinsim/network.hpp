#ifndef ODINSIM_NETWORK_HPP
#define ODINSIM_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "odinsim/encoding.hpp"
#include "odinsim/sdsp.hpp"
#include "odinsim/synaptic_memory.hpp"

namespace odinsim
{

constexpr int kNoDecision = -1;

struct NetworkConfig
{
    std::size_t n_inputs = kInputCount;
    std::size_t n_post = 256;
    std::size_t n_outputs = 10; // enabled neurons are 0 .. n_outputs-1
    int threshold = 32;
    int leak = 2;
    int refractory = 0;
    int v_max = 255;
    int ca_max = 15;
    int ca_leak_period = 8;
    RateCode code;

    void validate() const;
};

struct NeuronState
{
    int v = 0;
    int ca = 0;
    int refractory = 0;
    int spike_count = 0;
    bool enabled = false;

    void reset_sample() noexcept { v = ca = refractory = spike_count = 0; }
};

[[nodiscard]] std::vector<NeuronState> make_neurons(const NetworkConfig &config);

// The network a simulation run owns: crossbar, config and the neuron -> class
// map used to read out decisions.
struct Network
{
    NetworkConfig config;
    SynapticMemory memory;
    std::vector<int> label_map; // one entry per enabled neuron

    Network() = default;
    explicit Network(const NetworkConfig &cfg);
};

// Per-step extras: SDSP learning and the supervisory teacher drive.
struct StepControl
{
    const SdspParams *learning = nullptr;
    int teacher_neuron = -1;
    int teacher_current = 0;
    int teacher_inhibit = 0; // subtracted from every other enabled neuron
};

// Advances the network by one time step. Output spikes are appended to
// `fired` (indices of neurons that crossed threshold this step).
void step(SynapticMemory &memory, std::span<NeuronState> neurons, std::span<const std::uint16_t> input_spikes,
          const NetworkConfig &config, const StepControl &control, std::vector<std::uint16_t> &fired);

// Read-only stepping for inference.
void step(const SynapticMemory &memory, std::span<NeuronState> neurons, std::span<const std::uint16_t> input_spikes,
          const NetworkConfig &config, std::vector<std::uint16_t> &fired);

// Resets per-sample state and replays every step of the sample.
void run_sample(const SynapticMemory &memory, std::span<NeuronState> neurons, const EncodedSample &sample,
                const NetworkConfig &config);
// Same, with learning and/or teacher drive.
void run_sample(SynapticMemory &memory, std::span<NeuronState> neurons, const EncodedSample &sample,
                const NetworkConfig &config, const StepControl &control);

// argmax over enabled neurons (lowest index wins ties); kNoDecision when
// nothing spiked.
[[nodiscard]] int decide(std::span<const NeuronState> neurons, std::span<const int> label_map);

[[nodiscard]] int infer(const Network &net, std::span<NeuronState> neurons, const EncodedSample &sample);

struct EvalResult
{
    std::size_t correct = 0;
    std::size_t total = 0;
    std::size_t no_decision = 0;

    [[nodiscard]] double accuracy() const noexcept
    {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
};

// Spike trains are keyed by (seed, sample id), so both variants see the same
// input and must agree exactly. evaluate() spreads samples over OpenMP
// threads; evaluate_serial() is the single-threaded reference.
[[nodiscard]] EvalResult evaluate(const Network &net, const InputSet &data, std::uint64_t seed);
[[nodiscard]] EvalResult evaluate_serial(const Network &net, const InputSet &data, std::uint64_t seed);

[[nodiscard]] std::vector<int> predict(const Network &net, const InputSet &data, std::uint64_t seed);

} // namespace odinsim

#endif // ODINSIM_NETWORK_HPP
