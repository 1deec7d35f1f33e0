#include "entroscan/entropy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace entroscan {

namespace {

int bits_per_symbol(std::int64_t alphabet_size) {
    return std::bit_width(static_cast<std::uint64_t>(alphabet_size - 1));
}

constexpr std::int64_t kDenseCountLimit = std::int64_t{1} << 22;

}  // namespace

void validate_sequence(const SymbolSequence& seq) {
    if (seq.alphabet_size < 1) throw std::invalid_argument("sequence: alphabet size must be >= 1");
    if (seq.symbols.empty()) throw std::invalid_argument("sequence: length must be >= 1");
    for (std::int32_t s : seq.symbols) {
        if (s < 0 || s >= seq.alphabet_size) {
            throw std::invalid_argument("sequence: symbol " + std::to_string(s) + " outside alphabet [0, " +
                                        std::to_string(seq.alphabet_size) + ")");
        }
    }
}

BlockCounts count_blocks_range(const SymbolSequence& seq, int k, std::int64_t start, std::int64_t width) {
    if (seq.alphabet_size < 1) throw std::invalid_argument("count_blocks: alphabet size must be >= 1");
    if (start < 0 || width < 1 || start + width > seq.length()) {
        throw std::invalid_argument("count_blocks: window outside sequence");
    }
    if (k < 1 || k > width) throw std::invalid_argument("count_blocks: need 1 <= k <= window length");
    const std::int64_t a = seq.alphabet_size;
    // Block codes must fit a 64-bit word.
    if (static_cast<std::int64_t>(k) * bits_per_symbol(std::max<std::int64_t>(a, 2)) > 62) {
        throw std::invalid_argument("count_blocks: k * ceil(log2 alphabet) exceeds 62 bits");
    }

    BlockCounts out;
    out.k = k;
    out.alphabet_size = a;
    out.n_eff = width - k + 1;

    std::uint64_t code = 0;
    std::uint64_t top = 1;  // a^(k-1)
    for (int i = 0; i < k - 1; ++i) top *= static_cast<std::uint64_t>(a);
    const std::int32_t* s = seq.symbols.data() + start;
    for (int i = 0; i < k; ++i) code = code * static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(s[i]);

    const std::uint64_t total_codes = top * static_cast<std::uint64_t>(a);
    if (static_cast<std::int64_t>(total_codes) <= kDenseCountLimit && total_codes > 0) {
        std::vector<std::int64_t> dense(total_codes, 0);
        ++dense[code];
        for (std::int64_t i = 1; i < out.n_eff; ++i) {
            code = (code - static_cast<std::uint64_t>(s[i - 1]) * top) * static_cast<std::uint64_t>(a) +
                   static_cast<std::uint64_t>(s[i + k - 1]);
            ++dense[code];
        }
        for (std::uint64_t c = 0; c < total_codes; ++c) {
            if (dense[c] > 0) out.counts.emplace_back(c, dense[c]);
        }
    } else {
        std::unordered_map<std::uint64_t, std::int64_t> sparse;
        sparse.reserve(static_cast<std::size_t>(std::min<std::int64_t>(out.n_eff, 1 << 20)));
        ++sparse[code];
        for (std::int64_t i = 1; i < out.n_eff; ++i) {
            code = (code - static_cast<std::uint64_t>(s[i - 1]) * top) * static_cast<std::uint64_t>(a) +
                   static_cast<std::uint64_t>(s[i + k - 1]);
            ++sparse[code];
        }
        out.counts.assign(sparse.begin(), sparse.end());
        std::sort(out.counts.begin(), out.counts.end());
    }
    out.m_hat = static_cast<std::int64_t>(out.counts.size());
    return out;
}

BlockCounts count_blocks(const SymbolSequence& seq, int k) {
    return count_blocks_range(seq, k, 0, seq.length());
}

WindowSums accumulate_sums(const BlockCounts& counts) {
    WindowSums s;
    for (const auto& [code, f] : counts.counts) {
        const long double lf = std::log(static_cast<double>(f));
        const long double fd = static_cast<long double>(f);
        s.f_lnf += fd * lf;
        s.f_ln2f += fd * lf * lf;
        s.lnf += lf;
        s.inv_f += 1.0L / fd;
        s.lnf_over_f += lf / fd;
    }
    s.m_hat = counts.m_hat;
    return s;
}

double entropy_from_sums(const WindowSums& sums, std::int64_t n_eff) {
    if (n_eff < 1) throw std::invalid_argument("entropy: n_eff must be >= 1");
    const long double ln_n = std::log(static_cast<double>(n_eff));
    long double h = ln_n - sums.f_lnf / static_cast<long double>(n_eff);
    if (h < 0 && h > -1e-9L) h = 0;  // float fuzz on degenerate windows
    return static_cast<double>(h);
}

double entropy_plugin(const BlockCounts& counts) {
    if (counts.counts.empty()) throw std::invalid_argument("entropy_plugin: empty counts");
    return entropy_from_sums(accumulate_sums(counts), counts.n_eff);
}

namespace {

void validate_probs(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("probability vector is empty");
    long double sum = 0;
    for (double p : probs) {
        if (!(p > 0)) throw std::invalid_argument("probabilities must be strictly positive");
        sum += p;
    }
    if (std::abs(static_cast<double>(sum - 1.0L)) > 1e-12) {
        throw std::invalid_argument("probabilities must sum to 1 within 1e-12");
    }
}

}  // namespace

double entropy_true(std::span<const double> probs) {
    validate_probs(probs);
    long double acc = 0;
    for (double p : probs) acc -= static_cast<long double>(p) * std::log(p);
    return static_cast<double>(acc);
}

double entropy_bias_expansion(std::span<const double> probs, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("entropy_bias_expansion: n >= 1 required");
    const double h = entropy_true(probs);
    const auto m = static_cast<double>(probs.size());
    long double inv = 0, inv2 = 0;
    for (double p : probs) {
        inv += 1.0L / p;
        inv2 += 1.0L / (static_cast<long double>(p) * p);
    }
    const auto nd = static_cast<long double>(n);
    long double out = h - (m - 1) / (2 * nd) + (1 - inv) / (12 * nd * nd) + (inv - inv2) / (12 * nd * nd * nd);
    return static_cast<double>(out);
}

std::int64_t min_length(std::int64_t m) {
    if (m < 2) throw std::invalid_argument("min_length: M >= 2 required");
    const auto md = static_cast<double>(m);
    const double ratio = std::log(0.01 / md) / std::log((md - 1) / md);
    return static_cast<std::int64_t>(std::ceil(ratio));
}

double expected_observed_events(std::span<const double> probs, std::int64_t n) {
    validate_probs(probs);
    if (n < 0) throw std::invalid_argument("expected_observed_events: n >= 0 required");
    long double missing = 0;
    for (double p : probs) missing += std::pow(1.0 - p, static_cast<double>(n));
    return static_cast<double>(static_cast<long double>(probs.size()) - missing);
}

}  // namespace entroscan
