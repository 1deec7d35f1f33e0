// Rolling-window bandwidth selection: the objective over adjacent
// non-overlapping windows and a bounded integer golden-section maximizer.
#pragma once

#include "entroscan/entropy.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace entroscan {

struct BandwidthResult {
    std::int64_t w_opt = 0;
    double objective_value = 0;
    // (w, f(w)) in probe order; each w appears once.
    std::vector<std::pair<std::int64_t, double>> evaluations;
    bool stationary_verdict = false;  // objective_value < 0
};

// Partitions the sequence into floor(length/w) consecutive windows of length
// w (trailing remainder dropped), tests every adjacent pair with plug-in
// variances, and returns max|z| when the share of |z| > q99 strictly exceeds
// 1%, otherwise -1/w. Pairs whose combined variance is zero are untestable
// and excluded from both the share and the maximum.
double objective(const SymbolSequence& seq, std::int64_t w, int k, double q99);

// Golden-section search on the integer interval [w_min, w_max], unit final
// bracket, every probe logged; ties between probes resolve to the larger w.
BandwidthResult optimize_bandwidth(const SymbolSequence& seq, int k, double q99, std::int64_t w_min,
                                   std::int64_t w_max);

// Exhaustive probe of w_min, w_min+step, ... (diagnostic mode).
BandwidthResult optimize_bandwidth_grid(const SymbolSequence& seq, int k, double q99, std::int64_t w_min,
                                        std::int64_t w_max, std::int64_t step);

// Default search floor: min_length of the distinct-block count of the full
// sequence (falls back to k when fewer than two distinct blocks).
std::int64_t default_bandwidth_floor(const SymbolSequence& seq, int k);

// Default search ceiling: floor((length - k + 1) / 2).
std::int64_t default_bandwidth_ceiling(const SymbolSequence& seq, int k);

}  // namespace entroscan
