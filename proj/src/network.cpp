#include "odinsim/network.hpp"

#include <algorithm>
#include <array>
#include <utility>
#include <string>

#include "odinsim/error.hpp"

namespace odinsim
{

void NetworkConfig::validate() const
{
    auto fail = [](const std::string &what) { throw Error("invalid network config: " + what); };
    if (n_inputs == 0 || n_inputs > kInputCount)
    {
        fail("n_inputs must be in 1..256");
    }
    if (n_outputs == 0 || n_outputs > n_post || n_outputs > 256)
    {
        fail("n_outputs must be in 1..min(n_post, 256)");
    }
    if (threshold <= 0 || threshold > v_max)
    {
        fail("threshold must be in 1..v_max");
    }
    if (leak < 0 || refractory < 0 || ca_max < 0)
    {
        fail("leak, refractory and ca_max must be non-negative");
    }
    if (ca_leak_period <= 0)
    {
        fail("ca_leak_period must be positive");
    }
    if (code.steps == 0 || !(code.r_max >= 0.0 && code.r_max <= 1.0))
    {
        fail("steps must be positive and r_max in [0, 1]");
    }
}

std::vector<NeuronState> make_neurons(const NetworkConfig &config)
{
    std::vector<NeuronState> neurons(config.n_post);
    for (std::size_t j = 0; j < config.n_outputs; ++j)
    {
        neurons[j].enabled = true;
    }
    return neurons;
}

Network::Network(const NetworkConfig &cfg) : config(cfg), memory(cfg.n_inputs, cfg.n_post)
{
    config.validate();
    label_map.resize(cfg.n_outputs);
    for (std::size_t j = 0; j < cfg.n_outputs; ++j)
    {
        label_map[j] = static_cast<int>(j % 10);
    }
}

namespace
{

// Shared body; Learn selects whether SDSP writes back into the crossbar.
template <bool Learn, typename Memory>
void step_impl(Memory &memory, std::span<NeuronState> neurons, std::span<const std::uint16_t> input_spikes,
               const NetworkConfig &config, const StepControl &control, std::vector<std::uint16_t> &fired)
{
    const std::size_t n_out = std::min(config.n_outputs, neurons.size());

    // Teacher drive lands before the step's input events.
    if (control.teacher_neuron >= 0 && static_cast<std::size_t>(control.teacher_neuron) < n_out)
    {
        auto &n = neurons[static_cast<std::size_t>(control.teacher_neuron)];
        if (n.enabled && n.refractory == 0)
        {
            n.v += control.teacher_current;
        }
        if (control.teacher_inhibit > 0)
        {
            for (std::size_t j = 0; j < n_out; ++j)
            {
                if (j != static_cast<std::size_t>(control.teacher_neuron))
                {
                    neurons[j].v = std::max(neurons[j].v - control.teacher_inhibit, 0);
                }
            }
        }
    }

    // SDSP compares against the membrane after teacher drive and before this
    // step's input events, so the outcome does not depend on event order.
    std::array<int, 256> v_learn{};
    if constexpr (Learn)
    {
        for (std::size_t j = 0; j < n_out; ++j)
        {
            v_learn[j] = neurons[j].v;
        }
    }

    // Refractory neurons neither integrate nor learn.
    for (const auto pre : input_spikes)
    {
        for (std::size_t j = 0; j < n_out; ++j)
        {
            auto &n = neurons[j];
            if (!n.enabled || n.refractory > 0)
            {
                continue;
            }
            const std::uint8_t nib = memory.nibble(pre, j);
            if ((nib & kMappingBit) == 0)
            {
                continue;
            }
            if constexpr (Learn)
            {
                const auto before = SynapseEntry::unpack(nib);
                const auto after = sdsp_update(before, v_learn[j], n.ca, *control.learning);
                if (after != before)
                {
                    memory.set_entry(pre, j, after);
                }
            }
            n.v = std::min(n.v + (nib & kWeightMask), config.v_max);
        }
    }

    for (std::size_t j = 0; j < n_out; ++j)
    {
        auto &n = neurons[j];
        if (!n.enabled)
        {
            continue;
        }
        n.v = std::clamp(n.v, 0, config.v_max);
        n.v = std::max(n.v - config.leak, 0);
        const bool was_refractory = n.refractory > 0;
        if (n.v >= config.threshold)
        {
            n.v = 0;
            n.ca = std::min(n.ca + 1, config.ca_max);
            n.refractory = config.refractory;
            ++n.spike_count;
            fired.push_back(static_cast<std::uint16_t>(j));
        }
        else if (was_refractory)
        {
            --n.refractory;
        }
    }
}

void leak_calcium(std::span<NeuronState> neurons, std::size_t n_out)
{
    for (std::size_t j = 0; j < n_out; ++j)
    {
        neurons[j].ca = std::max(neurons[j].ca - 1, 0);
    }
}

} // namespace

void step(SynapticMemory &memory, std::span<NeuronState> neurons, std::span<const std::uint16_t> input_spikes,
          const NetworkConfig &config, const StepControl &control, std::vector<std::uint16_t> &fired)
{
    if (control.learning != nullptr)
    {
        step_impl<true>(memory, neurons, input_spikes, config, control, fired);
    }
    else
    {
        step_impl<false>(std::as_const(memory), neurons, input_spikes, config, control, fired);
    }
}

void step(const SynapticMemory &memory, std::span<NeuronState> neurons, std::span<const std::uint16_t> input_spikes,
          const NetworkConfig &config, std::vector<std::uint16_t> &fired)
{
    step_impl<false>(memory, neurons, input_spikes, config, StepControl{}, fired);
}

namespace
{

template <typename Memory, typename StepFn>
void replay(Memory &memory, std::span<NeuronState> neurons, const EncodedSample &sample,
            const NetworkConfig &config, StepFn &&one_step)
{
    for (auto &n : neurons)
    {
        n.reset_sample();
    }
    const std::size_t n_out = std::min(config.n_outputs, neurons.size());
    std::vector<std::uint16_t> fired;
    for (std::size_t t = 0; t < sample.steps(); ++t)
    {
        fired.clear();
        one_step(memory, sample.at(t), fired);
        if ((t + 1) % static_cast<std::size_t>(config.ca_leak_period) == 0)
        {
            leak_calcium(neurons, n_out);
        }
    }
}

} // namespace

void run_sample(const SynapticMemory &memory, std::span<NeuronState> neurons, const EncodedSample &sample,
                const NetworkConfig &config)
{
    replay(memory, neurons, sample, config,
           [&](const SynapticMemory &m, std::span<const std::uint16_t> in, std::vector<std::uint16_t> &fired) {
               step(m, neurons, in, config, fired);
           });
}

void run_sample(SynapticMemory &memory, std::span<NeuronState> neurons, const EncodedSample &sample,
                const NetworkConfig &config, const StepControl &control)
{
    replay(memory, neurons, sample, config,
           [&](SynapticMemory &m, std::span<const std::uint16_t> in, std::vector<std::uint16_t> &fired) {
               step(m, neurons, in, config, control, fired);
           });
}

int decide(std::span<const NeuronState> neurons, std::span<const int> label_map)
{
    int best = -1;
    int best_count = 0;
    const std::size_t n = std::min(neurons.size(), label_map.size());
    for (std::size_t j = 0; j < n; ++j)
    {
        if (neurons[j].enabled && neurons[j].spike_count > best_count)
        {
            best_count = neurons[j].spike_count;
            best = static_cast<int>(j);
        }
    }
    return best < 0 ? kNoDecision : label_map[static_cast<std::size_t>(best)];
}

int infer(const Network &net, std::span<NeuronState> neurons, const EncodedSample &sample)
{
    run_sample(net.memory, neurons, sample, net.config);
    return decide(neurons, net.label_map);
}

namespace
{

int predict_one(const Network &net, const InputSet &data, std::size_t i, std::uint64_t seed,
                std::vector<NeuronState> &neurons, EncodedSample &enc)
{
    encode_into(enc, data.sample(i), data.labels[i], seed, data.ids[i], net.config.code);
    return infer(net, neurons, enc);
}

void tally(EvalResult &r, int predicted, std::uint8_t label)
{
    ++r.total;
    if (predicted == kNoDecision)
    {
        ++r.no_decision;
    }
    else if (predicted == static_cast<int>(label))
    {
        ++r.correct;
    }
}

} // namespace

EvalResult evaluate_serial(const Network &net, const InputSet &data, std::uint64_t seed)
{
    if (data.empty())
    {
        throw Error("evaluate: empty dataset");
    }
    EvalResult r;
    auto neurons = make_neurons(net.config);
    EncodedSample enc;
    for (std::size_t i = 0; i < data.size(); ++i)
    {
        tally(r, predict_one(net, data, i, seed, neurons, enc), data.labels[i]);
    }
    return r;
}

EvalResult evaluate(const Network &net, const InputSet &data, std::uint64_t seed)
{
    if (data.empty())
    {
        throw Error("evaluate: empty dataset");
    }
    const auto n = static_cast<std::int64_t>(data.size());
    std::size_t correct = 0;
    std::size_t no_decision = 0;
#pragma omp parallel reduction(+ : correct, no_decision)
    {
        auto neurons = make_neurons(net.config);
        EncodedSample enc;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
        {
            const auto idx = static_cast<std::size_t>(i);
            const int p = predict_one(net, data, idx, seed, neurons, enc);
            if (p == kNoDecision)
            {
                ++no_decision;
            }
            else if (p == static_cast<int>(data.labels[idx]))
            {
                ++correct;
            }
        }
    }
    return {correct, data.size(), no_decision};
}

std::vector<int> predict(const Network &net, const InputSet &data, std::uint64_t seed)
{
    std::vector<int> out(data.size());
    const auto n = static_cast<std::int64_t>(data.size());
#pragma omp parallel
    {
        auto neurons = make_neurons(net.config);
        EncodedSample enc;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i)
        {
            out[static_cast<std::size_t>(i)] = predict_one(net, data, static_cast<std::size_t>(i), seed, neurons, enc);
        }
    }
    return out;
}

} // namespace odinsim
