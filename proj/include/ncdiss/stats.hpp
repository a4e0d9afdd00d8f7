#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>

#include <boost/math/distributions/students_t.hpp>

namespace ncdiss {

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n - 1) standard deviation, 0 for n = 1
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
};

/// Mean, sample standard deviation and a two-sided Student-t 95% interval
/// for the mean. Summation runs in input order.
inline SampleSummary summarize(std::span<const double> values) {
    SampleSummary s;
    s.count = values.size();
    if (s.count == 0) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.count);
    s.ci95_lo = s.ci95_hi = s.mean;
    if (s.count < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(s.count - 1));
    const boost::math::students_t dist(static_cast<double>(s.count - 1));
    const double half = boost::math::quantile(dist, 0.975) * s.std_dev / std::sqrt(static_cast<double>(s.count));
    s.ci95_lo = s.mean - half;
    s.ci95_hi = s.mean + half;
    return s;
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace ncdiss
