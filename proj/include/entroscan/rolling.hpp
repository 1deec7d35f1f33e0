// Fixed-width window of overlapping k-blocks that slides one symbol at a
// time with O(1) count and running-sum updates, so long scans do not recount
// every window from scratch.
#pragma once

#include "entroscan/entropy.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace entroscan {

class RollingWindow {
public:
    RollingWindow(const SymbolSequence& seq, int k, std::int64_t start, std::int64_t width);

    void advance();  // slides the window start by one symbol
    std::int64_t start() const { return start_; }
    std::int64_t n_eff() const { return n_eff_; }

    // Plug-in entropy + plug-in variance of the current window.
    EntropyEstimate estimate() const;

private:
    std::uint64_t code_at(std::int64_t pos) const;
    void add_block(std::uint64_t code);
    void remove_block(std::uint64_t code);
    std::int64_t& slot(std::uint64_t code);

    const SymbolSequence* seq_;
    int k_;
    std::int64_t start_, width_, n_eff_;
    bool dense_;
    std::vector<std::int64_t> dense_counts_;
    std::unordered_map<std::uint64_t, std::int64_t> sparse_counts_;
    WindowSums sums_;
};

}  // namespace entroscan
