#include "entroscan/bandwidth.hpp"

#include "entroscan/hypothesis.hpp"
#include "entroscan/variance.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace entroscan {

double objective(const SymbolSequence& seq, std::int64_t w, int k, double q99) {
    const std::int64_t n = seq.length();
    if (w < k) throw std::invalid_argument("objective: w >= k required");
    if (2 * w > n) throw std::invalid_argument("objective: fewer than 2 windows");
    if (!(q99 > 0)) throw std::invalid_argument("objective: q99 must be positive");

    const std::int64_t blocks = n / w;
    std::vector<EntropyEstimate> est;
    est.reserve(static_cast<std::size_t>(blocks));
    for (std::int64_t b = 0; b < blocks; ++b) {
        est.push_back(estimate_entropy(count_blocks_range(seq, k, b * w, w)));
    }

    std::int64_t testable = 0, significant = 0;
    double max_abs_z = 0;
    for (std::int64_t b = 0; b + 1 < blocks; ++b) {
        if (est[static_cast<std::size_t>(b)].variance + est[static_cast<std::size_t>(b + 1)].variance <= 0) continue;
        const double az = std::abs(z_score(est[static_cast<std::size_t>(b)], est[static_cast<std::size_t>(b + 1)]));
        ++testable;
        if (az > q99) ++significant;
        if (az > max_abs_z) max_abs_z = az;
    }
    if (testable == 0) return -1.0 / static_cast<double>(w);
    const double pct = 100.0 * static_cast<double>(significant) / static_cast<double>(testable);
    return pct > 1.0 ? max_abs_z : -1.0 / static_cast<double>(w);
}

namespace {

struct ProbeLog {
    const SymbolSequence& seq;
    int k;
    double q99;
    std::map<std::int64_t, double> memo;
    std::vector<std::pair<std::int64_t, double>> order;

    double eval(std::int64_t w) {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        const double f = objective(seq, w, k, q99);
        memo.emplace(w, f);
        order.emplace_back(w, f);
        return f;
    }

    BandwidthResult best() const {
        BandwidthResult r;
        r.evaluations = order;
        bool first = true;
        for (const auto& [w, f] : memo) {  // ascending w: ties keep the larger w
            if (first || f >= r.objective_value) {
                r.w_opt = w;
                r.objective_value = f;
                first = false;
            }
        }
        r.stationary_verdict = r.objective_value < 0;
        return r;
    }
};

void check_bracket(const SymbolSequence& seq, int k, std::int64_t w_min, std::int64_t w_max) {
    if (w_min < k) throw std::invalid_argument("optimize_bandwidth: w_min >= k required");
    if (!(w_min < w_max)) throw std::invalid_argument("optimize_bandwidth: w_min < w_max required");
    if (2 * w_max > seq.length()) throw std::invalid_argument("optimize_bandwidth: w_max too large for sequence");
}

}  // namespace

BandwidthResult optimize_bandwidth(const SymbolSequence& seq, int k, double q99, std::int64_t w_min,
                                   std::int64_t w_max) {
    check_bracket(seq, k, w_min, w_max);
    ProbeLog log{seq, k, q99, {}, {}};

    constexpr double phi = 0.6180339887498949;
    std::int64_t a = w_min, b = w_max;
    while (b - a > 3) {
        const auto gap = static_cast<double>(b - a);
        auto x1 = b - static_cast<std::int64_t>(std::llround(phi * gap));
        auto x2 = a + static_cast<std::int64_t>(std::llround(phi * gap));
        if (x1 <= a) x1 = a + 1;
        if (x2 >= b) x2 = b - 1;
        if (x1 >= x2) break;
        if (log.eval(x1) <= log.eval(x2)) {
            a = x1;
        } else {
            b = x2;
        }
    }
    for (std::int64_t w = a; w <= b; ++w) log.eval(w);
    return log.best();
}

BandwidthResult optimize_bandwidth_grid(const SymbolSequence& seq, int k, double q99, std::int64_t w_min,
                                        std::int64_t w_max, std::int64_t step) {
    check_bracket(seq, k, w_min, w_max);
    if (step < 1) throw std::invalid_argument("optimize_bandwidth_grid: step >= 1 required");
    ProbeLog log{seq, k, q99, {}, {}};
    for (std::int64_t w = w_min; w <= w_max; w += step) log.eval(w);
    log.eval(w_max);
    return log.best();
}

std::int64_t default_bandwidth_floor(const SymbolSequence& seq, int k) {
    const BlockCounts counts = count_blocks(seq, k);
    if (counts.m_hat < 2) return k;
    return std::max<std::int64_t>(k, min_length(counts.m_hat));
}

std::int64_t default_bandwidth_ceiling(const SymbolSequence& seq, int k) {
    return (seq.length() - k + 1) / 2;
}

}  // namespace entroscan
