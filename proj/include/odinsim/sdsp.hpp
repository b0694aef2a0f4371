#ifndef ODINSIM_SDSP_HPP
#define ODINSIM_SDSP_HPP

#include <cstdint>

#include "odinsim/synaptic_memory.hpp"

namespace odinsim
{

// Spike-dependent synaptic plasticity thresholds. A presynaptic spike
// potentiates when the post neuron's membrane is high and its calcium is in
// [ca_low, ca_up_high]; it depresses when the membrane is low and calcium is
// in [ca_low, ca_down_high]. Calcium outside these windows stops learning.
struct SdspParams
{
    int theta_up = 28;
    int ca_low = 1;       // theta_1
    int ca_down_high = 2; // theta_2
    int ca_up_high = 3;   // theta_3
    int teacher_current = 35;
    int teacher_inhibit = 16;

    [[nodiscard]] constexpr bool valid() const noexcept
    {
        return ca_low <= ca_down_high && ca_down_high <= ca_up_high;
    }
};

// Mapping bit is never touched; the weight saturates at 0 and 7.
[[nodiscard]] constexpr SynapseEntry sdsp_update(SynapseEntry e, int v_post, int ca_post,
                                                 const SdspParams &p) noexcept
{
    if (v_post >= p.theta_up && ca_post >= p.ca_low && ca_post <= p.ca_up_high)
    {
        if (e.weight < kWeightMax)
        {
            ++e.weight;
        }
    }
    else if (v_post < p.theta_up && ca_post >= p.ca_low && ca_post <= p.ca_down_high)
    {
        if (e.weight > 0)
        {
            --e.weight;
        }
    }
    return e;
}

} // namespace odinsim

#endif // ODINSIM_SDSP_HPP
