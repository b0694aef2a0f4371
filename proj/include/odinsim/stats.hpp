#ifndef ODINSIM_STATS_HPP
#define ODINSIM_STATS_HPP

#include <span>
#include <vector>

namespace odinsim
{

[[nodiscard]] double mean(std::span<const double> x);
// Sample standard deviation (n - 1); 0 for fewer than two values.
[[nodiscard]] double stddev(std::span<const double> x);
[[nodiscard]] double standard_error(std::span<const double> x);

struct PairedTest
{
    double mean_difference = 0.0; // mean of a - b
    double t = 0.0;
    double p_greater = 0.0; // one-sided p for H1: mean(a - b) > 0
    double p_less = 0.0;    // one-sided p for H1: mean(a - b) < 0
};

// Paired t-test on a[i] - b[i]. Identical samples give t = 0, p = 0.5.
[[nodiscard]] PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

// Average ranks, ties sharing the mean rank.
[[nodiscard]] std::vector<double> ranks(std::span<const double> x);
[[nodiscard]] double spearman(std::span<const double> x, std::span<const double> y);

} // namespace odinsim

#endif // ODINSIM_STATS_HPP
