#include "entroscan/simulate.hpp"

#include "entroscan/hypothesis.hpp"
#include "entroscan/rng.hpp"
#include "entroscan/variance.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace entroscan {

namespace {

constexpr std::uint64_t kUniformTag = 0x756e6966;   // stream tags keep the
constexpr std::uint64_t kTauTag = 0x7461752e;       // public generators
constexpr std::uint64_t kStepwiseTag = 0x73746570;  // decorrelated per seed

void fill_uniform(std::vector<std::int32_t>& out, std::int64_t alphabet_size, std::mt19937_64& rng) {
    const auto a = static_cast<std::uint64_t>(alphabet_size);
    if (std::has_single_bit(a)) {
        const int bits = std::bit_width(a) - 1;
        const std::uint64_t mask = a - 1;
        const int per_word = 64 / bits;
        std::uint64_t word = 0;
        int left = 0;
        for (auto& s : out) {
            if (left == 0) {
                word = rng();
                left = per_word;
            }
            s = static_cast<std::int32_t>(word & mask);
            word >>= bits;
            --left;
        }
    } else {
        for (auto& s : out) s = static_cast<std::int32_t>(next_below(rng, a));
    }
}

}  // namespace

SymbolSequence gen_uniform(std::int64_t length, std::int64_t alphabet_size, std::mt19937_64& rng) {
    if (length < 1) throw std::invalid_argument("gen_uniform: length >= 1 required");
    if (alphabet_size < 2) throw std::invalid_argument("gen_uniform: alphabet_size >= 2 required");
    SymbolSequence seq;
    seq.alphabet_size = alphabet_size;
    seq.symbols.resize(static_cast<std::size_t>(length));
    fill_uniform(seq.symbols, alphabet_size, rng);
    return seq;
}

SymbolSequence gen_uniform(std::int64_t length, std::int64_t alphabet_size, std::uint64_t seed) {
    auto rng = derive_stream(seed, kUniformTag);
    return gen_uniform(length, alphabet_size, rng);
}

SymbolSequence gen_tau_process(const TauProcessSpec& spec, std::mt19937_64& rng) {
    if (!(spec.tau > 0) || !(spec.tau < 1)) throw std::invalid_argument("gen_tau_process: tau in (0, 1) required");
    if (spec.length < 1) throw std::invalid_argument("gen_tau_process: length >= 1 required");
    if (spec.alphabet_size < 2) throw std::invalid_argument("gen_tau_process: alphabet_size >= 2 required");
    SymbolSequence seq;
    seq.alphabet_size = spec.alphabet_size;
    seq.symbols.resize(static_cast<std::size_t>(spec.length));
    const auto others = static_cast<std::uint64_t>(spec.alphabet_size - 1);
    std::int32_t prev = static_cast<std::int32_t>(next_below(rng, static_cast<std::uint64_t>(spec.alphabet_size)));
    seq.symbols[0] = prev;
    for (std::int64_t i = 1; i < spec.length; ++i) {
        if (next_double(rng) >= spec.tau) {
            auto pick = static_cast<std::int32_t>(next_below(rng, others));
            prev = pick >= prev ? pick + 1 : pick;
        }
        seq.symbols[static_cast<std::size_t>(i)] = prev;
    }
    return seq;
}

SymbolSequence gen_tau_process(const TauProcessSpec& spec) {
    auto rng = derive_stream(spec.seed, kTauTag);
    return gen_tau_process(spec, rng);
}

SymbolSequence gen_stepwise(const StepwiseSpec& spec) {
    const std::int64_t head = StepwiseSpec::kHeadLength;
    if (spec.middle_length < 0) throw std::invalid_argument("gen_stepwise: middle length >= 0 required");
    if (spec.total_length < head + spec.middle_length) {
        throw std::invalid_argument("gen_stepwise: total length must cover head + middle");
    }
    const std::int64_t tail = spec.total_length - head - spec.middle_length;

    SymbolSequence seq;
    seq.alphabet_size = spec.alphabet_size;
    seq.symbols.reserve(static_cast<std::size_t>(spec.total_length));

    auto rng_head = derive_stream(spec.seed, kStepwiseTag, 0);
    SymbolSequence part = gen_uniform(head, spec.alphabet_size, rng_head);
    seq.symbols.insert(seq.symbols.end(), part.symbols.begin(), part.symbols.end());

    if (spec.middle_length > 0) {
        auto rng_mid = derive_stream(spec.seed, kStepwiseTag, 1);
        TauProcessSpec mid{spec.middle_tau, spec.alphabet_size, spec.middle_length, 0};
        part = gen_tau_process(mid, rng_mid);
        seq.symbols.insert(seq.symbols.end(), part.symbols.begin(), part.symbols.end());
    }
    if (tail > 0) {
        auto rng_tail = derive_stream(spec.seed, kStepwiseTag, 2);
        part = gen_uniform(tail, spec.alphabet_size, rng_tail);
        seq.symbols.insert(seq.symbols.end(), part.symbols.begin(), part.symbols.end());
    }
    return seq;
}

double h_tau(double tau) {
    if (!(tau > 0) || !(tau < 1)) throw std::invalid_argument("h_tau: tau in (0, 1) required");
    return -2.0 * (tau * std::log(tau / 4.0) + (1.0 - tau) * std::log((1.0 - tau) / 12.0));
}

namespace {

double rejection_rate(std::int64_t trials, std::int64_t n, int k, double quantile, std::uint64_t seed,
                      std::int64_t alphabet_size, double tau_second) {
    if (trials < 1) throw std::invalid_argument("experiment: trials >= 1 required");
    if (n < k || k < 1) throw std::invalid_argument("experiment: need n >= k >= 1");
    if (!(quantile > 0)) throw std::invalid_argument("experiment: quantile must be positive");
    std::int64_t rejected = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        auto rng_a = derive_stream(seed, static_cast<std::uint64_t>(t), 0);
        auto rng_b = derive_stream(seed, static_cast<std::uint64_t>(t), 1);
        const SymbolSequence seq_a = gen_uniform(n, alphabet_size, rng_a);
        SymbolSequence seq_b;
        if (tau_second < 0) {
            seq_b = gen_uniform(n, alphabet_size, rng_b);
        } else {
            seq_b = gen_tau_process(TauProcessSpec{tau_second, alphabet_size, n, 0}, rng_b);
        }
        const EntropyEstimate est_a = estimate_entropy(count_blocks(seq_a, k));
        const EntropyEstimate est_b = estimate_entropy(count_blocks(seq_b, k));
        if (est_a.variance + est_b.variance <= 0) continue;  // untestable pair
        if (test_equal_entropy(est_a, est_b, quantile).significant) ++rejected;
    }
    return static_cast<double>(rejected) / static_cast<double>(trials);
}

}  // namespace

double run_size_experiment(std::int64_t trials, std::int64_t n, int k, double quantile, std::uint64_t seed,
                           std::int64_t alphabet_size) {
    return rejection_rate(trials, n, k, quantile, seed, alphabet_size, -1.0);
}

double run_power_experiment(double tau, std::int64_t trials, std::int64_t n, int k, double quantile,
                            std::uint64_t seed, std::int64_t alphabet_size) {
    if (!(tau > 0) || !(tau < 1)) throw std::invalid_argument("run_power_experiment: tau in (0, 1) required");
    return rejection_rate(trials, n, k, quantile, seed, alphabet_size, tau);
}

}  // namespace entroscan
