// Symbol sequences, overlapping k-block counting, and the plug-in entropy
// estimator with its exact-distribution companions (true entropy, bias
// expansion, sample-size rules). Entropies are in nats throughout.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace entroscan {

struct SymbolSequence {
    std::vector<std::int32_t> symbols;
    std::int64_t alphabet_size = 0;

    std::int64_t length() const { return static_cast<std::int64_t>(symbols.size()); }
};

// Throws if any symbol falls outside [0, alphabet_size) or the sequence is empty.
void validate_sequence(const SymbolSequence& seq);

struct BlockCounts {
    int k = 0;
    std::int64_t n_eff = 0;
    std::int64_t alphabet_size = 0;
    std::int64_t m_hat = 0;  // number of distinct observed blocks
    // (block code, frequency), sorted by code; codes are base-alphabet_size
    // encodings of the block with the first symbol most significant.
    std::vector<std::pair<std::uint64_t, std::int64_t>> counts;
};

struct EntropyEstimate {
    double value = 0;
    double variance = 0;
    int k = 0;
    std::int64_t n_eff = 0;
    std::int64_t m_hat = 0;
    bool variance_clamped = false;   // raw plug-in variance was negative
    bool below_min_length = false;   // n_eff < min_length(m_hat)
};

// Running sums over observed block frequencies f >= 1, enough to evaluate the
// plug-in entropy and variance in O(1) once a window is counted.
struct WindowSums {
    long double f_lnf = 0;
    long double f_ln2f = 0;
    long double lnf = 0;
    long double inv_f = 0;
    long double lnf_over_f = 0;
    std::int64_t m_hat = 0;
};

WindowSums accumulate_sums(const BlockCounts& counts);
double entropy_from_sums(const WindowSums& sums, std::int64_t n_eff);

// Overlapping k-block counts of seq[start, start+width).
BlockCounts count_blocks_range(const SymbolSequence& seq, int k, std::int64_t start, std::int64_t width);
BlockCounts count_blocks(const SymbolSequence& seq, int k);

// H-hat = -sum p ln p with p = f / n_eff; only observed blocks contribute.
double entropy_plugin(const BlockCounts& counts);

// Exact entropy of a known distribution; rejects non-positive entries and
// vectors not summing to 1 within 1e-12.
double entropy_true(std::span<const double> probs);

// E(H-hat) expansion: H - (M-1)/2n + (1 - sum 1/p)/12n^2 + sum(1/p - 1/p^2)/12n^3
double entropy_bias_expansion(std::span<const double> probs, std::int64_t n);

// Smallest n with M(1-1/M)^n < 0.01, by the ceiling formula. Requires M >= 2.
std::int64_t min_length(std::int64_t m);

// E[M-hat] = M - sum (1-p)^n
double expected_observed_events(std::span<const double> probs, std::int64_t n);

}  // namespace entroscan
