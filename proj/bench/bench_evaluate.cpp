#include <benchmark/benchmark.h>

#include "odinsim/network.hpp"
#include "odinsim/plasticity.hpp"

namespace
{

struct Setup
{
    odinsim::InputSet train = odinsim::make_synthetic_set(10, 50, 1);
    odinsim::InputSet eval = odinsim::make_synthetic_set(10, 100, 2);
    odinsim::Network net{odinsim::NetworkConfig{}};

    Setup() { (void)odinsim::pretrain(net, train, odinsim::SdspParams{}, odinsim::PretrainOptions{}); }
};

const Setup &setup()
{
    static const Setup s;
    return s;
}

void BM_EvaluateParallel(benchmark::State &state)
{
    const auto &s = setup();
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(odinsim::evaluate(s.net, s.eval, 3));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.eval.size()));
}

void BM_EvaluateSerial(benchmark::State &state)
{
    const auto &s = setup();
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(odinsim::evaluate_serial(s.net, s.eval, 3));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.eval.size()));
}

} // namespace

BENCHMARK(BM_EvaluateParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
