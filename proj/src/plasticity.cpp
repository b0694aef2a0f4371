#include "odinsim/plasticity.hpp"

#include <algorithm>
#include <string>

#include "odinsim/error.hpp"
#include "odinsim/rng.hpp"

namespace odinsim
{

namespace
{

int teacher_for(const Network &net, std::uint8_t label)
{
    for (std::size_t j = 0; j < net.label_map.size(); ++j)
    {
        if (net.label_map[j] == static_cast<int>(label))
        {
            return static_cast<int>(j);
        }
    }
    return -1;
}

} // namespace

void learning_epoch(Network &net, const InputSet &data, const SdspParams &params, LearningMode mode,
                    std::uint64_t seed)
{
    if (data.empty())
    {
        throw Error("learning epoch on an empty dataset");
    }
    if (!params.valid())
    {
        throw Error("SDSP calcium thresholds must satisfy ca_low <= ca_down_high <= ca_up_high");
    }
    auto neurons = make_neurons(net.config);
    EncodedSample enc;
    StepControl control;
    control.learning = &params;
    for (std::size_t i = 0; i < data.size(); ++i)
    {
        encode_into(enc, data.sample(i), data.labels[i], seed, data.ids[i], net.config.code);
        if (mode == LearningMode::teacher)
        {
            control.teacher_neuron = teacher_for(net, data.labels[i]);
            control.teacher_current = params.teacher_current;
            control.teacher_inhibit = params.teacher_inhibit;
        }
        run_sample(net.memory, neurons, enc, net.config, control);
    }
}

LabelAssignment assign_labels(const Network &net, const InputSet &subset, std::uint64_t seed, std::size_t n_classes)
{
    std::vector<std::size_t> per_class(n_classes, 0);
    for (const auto l : subset.labels)
    {
        if (l >= n_classes)
        {
            throw Error("label " + std::to_string(l) + " outside class range");
        }
        ++per_class[l];
    }
    for (std::size_t c = 0; c < n_classes; ++c)
    {
        if (per_class[c] == 0)
        {
            throw Error("label assignment subset has no sample of class " + std::to_string(c));
        }
    }

    const std::size_t n_out = net.config.n_outputs;
    std::vector<std::uint64_t> wins(n_out * n_classes, 0);
    std::vector<std::uint64_t> spikes(n_out * n_classes, 0);
    std::vector<int> by_index(n_out);
    for (std::size_t j = 0; j < n_out; ++j)
    {
        by_index[j] = static_cast<int>(j);
    }
    auto neurons = make_neurons(net.config);
    EncodedSample enc;
    for (std::size_t i = 0; i < subset.size(); ++i)
    {
        const std::size_t c = subset.labels[i];
        encode_into(enc, subset.sample(i), subset.labels[i], seed, subset.ids[i], net.config.code);
        run_sample(net.memory, neurons, enc, net.config);
        for (std::size_t j = 0; j < n_out; ++j)
        {
            spikes[j * n_classes + c] += static_cast<std::uint64_t>(neurons[j].spike_count);
        }
        const int winner = decide(neurons, by_index);
        if (winner != kNoDecision)
        {
            ++wins[static_cast<std::size_t>(winner) * n_classes + c];
        }
    }

    // Per-class rates (count / n_c) compared by cross-multiplication.
    auto best_class = [&](const std::vector<std::uint64_t> &counts, std::size_t j) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_classes; ++c)
        {
            if (counts[j * n_classes + c] * per_class[best] > counts[j * n_classes + best] * per_class[c])
            {
                best = c;
            }
        }
        return best;
    };

    LabelAssignment out;
    out.label_map.assign(n_out, 0);
    for (std::size_t j = 0; j < n_out; ++j)
    {
        const std::size_t by_wins = best_class(wins, j);
        if (wins[j * n_classes + by_wins] > 0)
        {
            out.label_map[j] = static_cast<int>(by_wins);
            continue;
        }
        const std::size_t by_spikes = best_class(spikes, j);
        if (spikes[j * n_classes + by_spikes] == 0)
        {
            out.silent.push_back(j);
        }
        out.label_map[j] = static_cast<int>(by_spikes);
    }
    return out;
}

LabelAssignment pretrain(Network &net, const InputSet &train, const SdspParams &params, const PretrainOptions &opt)
{
    const SynapseEntry init{opt.initial_weight, true};
    for (std::size_t pre = 0; pre < net.memory.n_pre(); ++pre)
    {
        for (std::size_t j = 0; j < net.config.n_outputs; ++j)
        {
            net.memory.set_entry(pre, j, init);
        }
    }
    for (std::size_t j = 0; j < net.config.n_outputs; ++j)
    {
        net.label_map[j] = static_cast<int>(j % 10);
    }
    for (std::size_t pass = 0; pass < opt.passes; ++pass)
    {
        learning_epoch(net, train, params, LearningMode::teacher, hash_keys({stream::train, opt.seed, pass}));
    }
    std::size_t n_classes = 0;
    for (const auto l : train.labels)
    {
        n_classes = std::max<std::size_t>(n_classes, l + 1U);
    }
    auto labels = assign_labels(net, train, hash_keys({stream::label, opt.seed}), n_classes);
    net.label_map = labels.label_map;
    return labels;
}

} // namespace odinsim
