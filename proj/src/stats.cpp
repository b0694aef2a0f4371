#include "odinsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "odinsim/error.hpp"

namespace odinsim
{

double mean(std::span<const double> x)
{
    if (x.empty())
    {
        throw Error("mean of an empty sample");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x)
{
    if (x.size() < 2)
    {
        return 0.0;
    }
    const double m = mean(x);
    double ss = 0.0;
    for (const double v : x)
    {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double standard_error(std::span<const double> x)
{
    return x.empty() ? 0.0 : stddev(x) / std::sqrt(static_cast<double>(x.size()));
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.size() < 2)
    {
        throw Error("paired t-test needs two equal-length samples of at least two values");
    }
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        d[i] = a[i] - b[i];
    }
    PairedTest r;
    r.mean_difference = mean(d);
    const double se = standard_error(d);
    if (se == 0.0)
    {
        r.t = r.mean_difference == 0.0 ? 0.0 : std::copysign(INFINITY, r.mean_difference);
        r.p_greater = r.mean_difference > 0.0 ? 0.0 : (r.mean_difference < 0.0 ? 1.0 : 0.5);
        r.p_less = 1.0 - r.p_greater;
        return r;
    }
    r.t = r.mean_difference / se;
    const boost::math::students_t dist(static_cast<double>(d.size() - 1));
    r.p_greater = boost::math::cdf(boost::math::complement(dist, r.t));
    r.p_less = boost::math::cdf(dist, r.t);
    return r;
}

std::vector<double> ranks(std::span<const double> x)
{
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < order.size();)
    {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]])
        {
            ++j;
        }
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
        {
            r[order[k]] = avg;
        }
        i = j + 1;
    }
    return r;
}

double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
    {
        throw Error("spearman needs two equal-length samples of at least two values");
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
    {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace odinsim
