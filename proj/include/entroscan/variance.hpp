// Variance of the plug-in entropy estimator: the known-probability
// approximation, the plug-in estimator from counts, the uniform closed form,
// and the Taylor-expectation series used to cross-validate them.
#pragma once

#include "entroscan/entropy.hpp"

#include <cstdint>
#include <span>

namespace entroscan {

struct VarianceBreakdown {
    double term1 = 0;  // coefficient of 1/n
    double term2 = 0;  // coefficient of 1/n^2
    double term3 = 0;  // coefficient of 1/n^3
    double total = 0;  // term1/n + term2/n^2 + term3/n^3
};

// Approximation of Var(H-hat) from known probabilities:
//   term1 = -H^2 + sum p ln^2 p
//   term2 = M/2 - 1/2
//   term3 = ((1-H) sum 1/p - sum ln(p)/p - 1) / 6
VarianceBreakdown variance_true(std::span<const double> probs, std::int64_t n);

// Equal-probability closed form (M-1)/(2 n_eff^2) + (M^2-1)/(6 n_eff^3)
// with n_eff = n - k + 1.
double variance_max(std::int64_t m, std::int64_t n, int k);

struct PluginVariance {
    double value = 0;  // clamped at 0 from below
    double raw = 0;
    bool clamped = false;
    bool below_min_length = false;
};

PluginVariance variance_plugin_from_sums(const WindowSums& sums, std::int64_t n_eff);
PluginVariance variance_plugin(const BlockCounts& counts);

// Plug-in entropy + plug-in variance with flags in one record.
EntropyEstimate estimate_entropy(const BlockCounts& counts);

double harmonic_number(int m);  // S_m = sum_{j=1..m} 1/j

// Taylor-expectation series built from the moment polynomials, truncated at
// total moment order max_order (<= 6) and at the 1/n^3 proof budget.
// E(p-hat ln p-hat)
double series_expectation_plogp(double p, std::int64_t n, int max_order);
// E(p-hat^2 ln^2 p-hat)
double series_expectation_p2log2p(double p, std::int64_t n, int max_order);
// E(p1-hat ln p1-hat * p2-hat ln p2-hat)
double series_expectation_cross(double p1, double p2, std::int64_t n, int max_order);

}  // namespace entroscan
