#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "odinsim/error.hpp"
#include "odinsim/faultsim.hpp"
#include "odinsim/plasticity.hpp"
#include "odinsim/rng.hpp"
#include "odinsim/stats.hpp"
#include "support.hpp"

using namespace odinsim;

namespace
{

constexpr SdspParams kParams{};

std::uint64_t mapping_mask_hash(const SynapticMemory &m)
{
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < m.n_pre(); ++i)
    {
        for (std::size_t j = 0; j < m.n_post(); ++j)
        {
            h = mix64(h ^ (m.entry(i, j).mapped ? (i * m.n_post() + j) : 0));
        }
    }
    return h;
}

bool weights_in_range(const SynapticMemory &m)
{
    for (std::size_t i = 0; i < m.n_pre(); ++i)
    {
        for (std::size_t j = 0; j < m.n_post(); ++j)
        {
            if (m.entry(i, j).weight > kWeightMax)
            {
                return false;
            }
        }
    }
    return true;
}

Network random_network(std::uint64_t seed)
{
    NetworkConfig c;
    c.n_outputs = 3;
    Network net(c);
    SplitMix64 rng(seed);
    for (auto &b : net.memory.bytes())
    {
        b = static_cast<std::uint8_t>(rng());
    }
    net.label_map = {0, 1, 2};
    return net;
}

bool in_band(std::size_t input, std::size_t cls, std::size_t n_classes)
{
    return (input / kInputSide) * n_classes / kInputSide == cls;
}

} // namespace

TEST_CASE("sdsp_update")
{
    const SdspParams p{28, 1, 2, 3, 0, 0};
    SUBCASE("potentiation saturates at 7")
    {
        CHECK(sdsp_update({7, true}, 30, 2, p) == SynapseEntry{7, true});
        CHECK(sdsp_update({3, true}, 30, 3, p) == SynapseEntry{4, true});
    }
    SUBCASE("depression floors at 0")
    {
        CHECK(sdsp_update({0, true}, 5, 1, p) == SynapseEntry{0, true});
        CHECK(sdsp_update({5, true}, 5, 2, p) == SynapseEntry{4, true});
    }
    SUBCASE("calcium outside the windows stops learning")
    {
        for (int v : {0, 27, 28, 255})
        {
            CHECK(sdsp_update({4, true}, v, 0, p) == SynapseEntry{4, true});
            CHECK(sdsp_update({4, true}, v, 4, p) == SynapseEntry{4, true});
        }
        // ca = 3 is inside the up window only.
        CHECK(sdsp_update({4, true}, 10, 3, p) == SynapseEntry{4, true});
    }
    SUBCASE("mapping bit is untouched")
    {
        CHECK_FALSE(sdsp_update({3, false}, 30, 2, p).mapped);
        CHECK(sdsp_update({3, true}, 5, 2, p).mapped);
    }
}

TEST_CASE("sdsp_update matches an exhaustive rule table")
{
    const SdspParams p{20, 2, 5, 9, 0, 0};
    for (int w = 0; w <= 7; ++w)
    {
        for (int v = 0; v < 40; ++v)
        {
            for (int ca = 0; ca <= 15; ++ca)
            {
                int expect = w;
                if (v >= 20 && ca >= 2 && ca <= 9)
                {
                    expect = std::min(w + 1, 7);
                }
                else if (v < 20 && ca >= 2 && ca <= 5)
                {
                    expect = std::max(w - 1, 0);
                }
                const auto e = sdsp_update({static_cast<std::uint8_t>(w), true}, v, ca, p);
                CHECK(e.weight == expect);
            }
        }
    }
}

TEST_CASE("learning epochs keep weights bounded and mapping bits fixed")
{
    const auto set = make_synthetic_set(3, 8, 11);
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        auto net = random_network(seed);
        const auto mask = mapping_mask_hash(net.memory);
        learning_epoch(net, set, kParams, LearningMode::unsupervised, seed);
        CHECK(weights_in_range(net.memory));
        CHECK(mapping_mask_hash(net.memory) == mask);
        learning_epoch(net, set, kParams, LearningMode::teacher, seed);
        CHECK(weights_in_range(net.memory));
        CHECK(mapping_mask_hash(net.memory) == mask);
    }
}

TEST_CASE("calcium windows above ca_max make an epoch a no-op")
{
    SdspParams frozen = kParams;
    frozen.ca_low = frozen.ca_down_high = frozen.ca_up_high = NetworkConfig{}.ca_max + 1;
    const auto set = make_synthetic_set(3, 8, 12);
    auto net = random_network(4);
    const auto before = net.memory;
    learning_epoch(net, set, frozen, LearningMode::unsupervised, 1);
    learning_epoch(net, set, frozen, LearningMode::teacher, 2);
    CHECK(net.memory == before);
}

TEST_CASE("no input spikes means no learning")
{
    InputSet blank;
    const std::vector<std::uint8_t> zeros(kInputCount, 0);
    blank.push_back(zeros, 1, 0);
    auto net = random_network(9);
    const auto h = net.memory.hash();
    learning_epoch(net, blank, kParams, LearningMode::unsupervised, 3);
    CHECK(net.memory.hash() == h);
}

TEST_CASE("empty epoch data is an error")
{
    auto net = random_network(1);
    CHECK_THROWS_AS(learning_epoch(net, InputSet{}, kParams, LearningMode::unsupervised, 1), Error);
}

TEST_CASE("teacher pretraining learns a 3-class clusterable task")
{
    const std::size_t n_classes = 3;
    const auto set = make_synthetic_set(n_classes, 20, 3);
    NetworkConfig c;
    c.n_outputs = n_classes;
    Network net(c);
    PretrainOptions opt;
    double acc = 0.0;
    std::size_t passes = 0;
    for (passes = 1; passes <= 5 && acc < 1.0; ++passes)
    {
        opt.passes = passes;
        net = Network(c);
        const auto labels = pretrain(net, set, kParams, opt);
        CHECK(labels.silent.empty());
        acc = evaluate(net, set, 1).accuracy();
    }
    CHECK(acc == 1.0);
    CHECK(net.label_map == std::vector<int>{0, 1, 2});

    // Brute-force check: each neuron's weights grew only on its own band.
    for (std::size_t j = 0; j < n_classes; ++j)
    {
        int on = 0;
        for (std::size_t i = 0; i < kInputCount; ++i)
        {
            const auto w = net.memory.entry(i, j).weight;
            if (in_band(i, j, n_classes))
            {
                on += w;
            }
            else
            {
                CHECK(w == 0);
            }
        }
        CHECK(on > 0);
    }
}

TEST_CASE("assign_labels")
{
    NetworkConfig c;
    c.n_outputs = 3;
    c.threshold = 7;
    c.leak = 0;
    const auto set = make_synthetic_set(3, 5, 6);

    SUBCASE("a neuron that only fires on one class maps to it")
    {
        Network net(c);
        for (std::size_t i = 0; i < kInputCount; ++i)
        {
            net.memory.set_entry(i, 0, {7, in_band(i, 2, 3)});
            net.memory.set_entry(i, 1, {7, in_band(i, 0, 3)});
        }
        const auto a = assign_labels(net, set, 1, 3);
        CHECK(a.label_map[0] == 2);
        CHECK(a.label_map[1] == 0);
        CHECK(a.label_map[2] == 0);
        CHECK(a.silent == std::vector<std::size_t>{2});
    }
    SUBCASE("equal response to two classes picks the lower id")
    {
        Network net(c);
        for (std::size_t i = 0; i < kInputCount; ++i)
        {
            net.memory.set_entry(i, 0, {7, in_band(i, 1, 3) || in_band(i, 2, 3)});
        }
        InputSet twins;
        std::vector<std::uint8_t> px(kInputCount, 0);
        for (std::size_t i = 0; i < kInputCount; ++i)
        {
            px[i] = in_band(i, 1, 3) ? 255 : 0;
        }
        twins.push_back(px, 0, 0);
        twins.push_back(px, 1, 1);
        // Only neuron 0 fires and it wins on both classes equally.
        const auto a = assign_labels(net, twins, 1, 2);
        CHECK(a.label_map[0] == 0);
    }
    SUBCASE("a subset missing a class is an error")
    {
        Network net(c);
        CHECK_THROWS_AS((void)assign_labels(net, set.slice(0, 2), 1, 3), Error);
    }
}

TEST_CASE("pretrained MNIST labels agree with the teacher assignment")
{
    const auto dir = testing::mnist_dir();
    if (!dir)
    {
        MESSAGE("MNIST not available; skipped");
        return;
    }
    const auto files = mnist_files(*dir);
    const auto images = load_image_set(files.train_images, files.train_labels);
    const auto train = prepare_inputs(images, 0, 6000);
    Network net{NetworkConfig{}};
    (void)pretrain(net, train, kParams, PretrainOptions{});
    const auto check = prepare_inputs(images, 6000, 1000);
    const auto a = assign_labels(net, check, 5);
    std::vector<int> identity(10);
    std::iota(identity.begin(), identity.end(), 0);
    CHECK(a.label_map == identity);
}

TEST_CASE("one unsupervised epoch does not hurt after weight-bit upsets")
{
    const std::size_t n_classes = 10;
    const auto train = make_synthetic_set(n_classes, 20, 31);
    const auto eval = make_synthetic_set(n_classes, 30, 32);
    NetworkConfig c;
    c.n_outputs = n_classes;
    Network base(c);
    (void)pretrain(base, train, kParams, PretrainOptions{});

    SdspParams epoch;
    epoch.theta_up = 24;
    epoch.ca_low = epoch.ca_down_high = epoch.ca_up_high = 15;
    epoch.teacher_current = epoch.teacher_inhibit = 0;

    // Weight bits of the enabled columns: offsets 0..2 of every record.
    const std::size_t weight_bits = c.n_inputs * n_classes * 3;
    const std::size_t k = weight_bits / 20;

    std::vector<double> with_epoch;
    std::vector<double> without_epoch;
    for (std::uint64_t seed = 1; seed <= 30; ++seed)
    {
        Network net = base;
        SplitMix64 rng(hash_keys({stream::fault, seed}));
        std::vector<std::uint64_t> chosen;
        while (chosen.size() < k)
        {
            const auto r = rng.below(weight_bits);
            const std::size_t rec = r / 3;
            const std::uint64_t bit = net.memory.flat_index({rec / n_classes, rec % n_classes, r % 3});
            if (std::find(chosen.begin(), chosen.end(), bit) == chosen.end())
            {
                chosen.push_back(bit);
                apply_flip(net.memory, bit);
            }
        }
        without_epoch.push_back(evaluate(net, eval, 77).accuracy());
        learning_epoch(net, train, epoch, LearningMode::unsupervised, hash_keys({stream::epoch, seed}));
        net.label_map = assign_labels(net, train, hash_keys({stream::label, seed}), n_classes).label_map;
        with_epoch.push_back(evaluate(net, eval, 77).accuracy());
    }
    MESSAGE("mean accuracy without epoch " << mean(without_epoch) << ", with epoch " << mean(with_epoch));
    CHECK(mean(with_epoch) >= mean(without_epoch));
}
