#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace entroscan {

// Nearest-rank percentile: the ceil(q*N)-th smallest sample value.
inline double percentile_nearest_rank(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("percentile rank must be in (0, 1]");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

inline double mean(std::span<const double> xs) {
    long double acc = 0;
    for (double x : xs) acc += x;
    return static_cast<double>(acc / static_cast<long double>(xs.size()));
}

inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance needs n >= 2");
    const double m = mean(xs);
    long double acc = 0;
    for (double x : xs) {
        long double d = x - m;
        acc += d * d;
    }
    return static_cast<double>(acc / static_cast<long double>(xs.size() - 1));
}

// Standard error of the sample mean.
inline double standard_error(std::span<const double> xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// Standard error of the sample variance, from the fourth central moment.
inline double variance_standard_error(std::span<const double> xs) {
    const double m = mean(xs);
    const double v = sample_variance(xs);
    long double m4 = 0;
    for (double x : xs) {
        long double d = x - m;
        long double d2 = d * d;
        m4 += d2 * d2;
    }
    m4 /= static_cast<long double>(xs.size());
    long double var_of_var = (m4 - static_cast<long double>(v) * v) / static_cast<long double>(xs.size());
    if (var_of_var < 0) var_of_var = 0;
    return static_cast<double>(std::sqrt(static_cast<double>(var_of_var)));
}

}  // namespace entroscan
