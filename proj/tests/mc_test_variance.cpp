// Monte Carlo oracles for the variance formulas: sampled moments of the
// plug-in estimator against the analytic expansions.
#include "entroscan/variance.hpp"

#include "entroscan/rng.hpp"
#include "entroscan/simulate.hpp"
#include "entroscan/stats_util.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace entroscan;

namespace {

// plug-in entropy of one multinomial draw over `probs`, n symbols
double draw_entropy(std::span<const double> probs, std::int64_t n, std::mt19937_64& rng,
                    std::vector<std::int64_t>& counts) {
    counts.assign(probs.size(), 0);
    for (std::int64_t i = 0; i < n; ++i) {
        double u = next_double(rng);
        std::size_t j = 0;
        while (j + 1 < probs.size()) {
            u -= probs[j];
            if (u < 0) break;
            ++j;
        }
        ++counts[j];
    }
    long double f_lnf = 0;
    for (auto f : counts) {
        if (f > 0) f_lnf += static_cast<long double>(f) * std::log(static_cast<double>(f));
    }
    return static_cast<double>(std::log(static_cast<double>(n)) - f_lnf / static_cast<long double>(n));
}

}  // namespace

TEST_CASE("bias expansion matches the Monte Carlo mean of the estimator") {
    const std::vector<double> uniform4(4, 0.25);
    const std::int64_t n = 1000, reps = 1000000;
    std::vector<double> hs(static_cast<std::size_t>(reps));
    std::vector<std::int64_t> counts;
    auto rng = derive_stream(2024, 1);
    for (auto& h : hs) h = draw_entropy(uniform4, n, rng, counts);
    const double mc_mean = mean(hs);
    const double se = standard_error(hs);
    CHECK(std::abs(mc_mean - entropy_bias_expansion(uniform4, n)) <= 3 * se);
    // and the uncorrected true entropy is visibly biased away
    CHECK(std::abs(mc_mean - entropy_true(uniform4)) > 10 * se);
}

TEST_CASE("variance approximation matches the Monte Carlo variance (uniform and skewed)") {
    const std::vector<double> uniform4(4, 0.25);
    const std::vector<double> skew{0.4, 0.3, 0.2, 0.1};
    for (const auto& probs : {uniform4, skew}) {
        for (std::int64_t n : {500LL, 2000LL}) {
            const std::int64_t reps = 100000;
            std::vector<double> hs(static_cast<std::size_t>(reps));
            std::vector<std::int64_t> counts;
            auto rng = derive_stream(515, static_cast<std::uint64_t>(n), probs[0] == 0.25 ? 0 : 1);
            for (auto& h : hs) h = draw_entropy(probs, n, rng, counts);
            const double mc_var = sample_variance(hs);
            const double se = variance_standard_error(hs);
            CHECK(std::abs(mc_var - variance_true(probs, n).total) <= 3 * se);
        }
    }
}

TEST_CASE("plug-in variance estimator is unbiased for the variance approximation") {
    // (M, n) pairs with all events comfortably observed
    struct Config {
        std::int64_t alphabet;
        std::int64_t n;
    };
    for (const Config cfg : {Config{4, 2000}, Config{16, 5000}}) {
        const std::int64_t reps = 100000;
        std::vector<double> vars(static_cast<std::size_t>(reps));
        auto rng = derive_stream(8088, static_cast<std::uint64_t>(cfg.alphabet));
        for (auto& v : vars) {
            const SymbolSequence seq = gen_uniform(cfg.n, cfg.alphabet, rng);
            v = variance_plugin(count_blocks(seq, 1)).value;
        }
        const std::vector<double> uniform(static_cast<std::size_t>(cfg.alphabet),
                                          1.0 / static_cast<double>(cfg.alphabet));
        const double target = variance_true(uniform, cfg.n).total;
        const double se = standard_error(vars);
        const double budget = std::max(3 * se, 10.0 / (static_cast<double>(cfg.n) * cfg.n * cfg.n * cfg.n) *
                                                    static_cast<double>(cfg.n) * cfg.n * cfg.n);
        CHECK(std::abs(mean(vars) - target) <= budget);
    }
}

TEST_CASE("series expectation of p^2 ln^2 p matches a direct Monte Carlo mean") {
    const double p = 0.25;
    const std::int64_t n = 2000, reps = 1000000;
    // Bernoulli(1/4) counts via two random bits per trial, 32 trials a word
    auto rng = derive_stream(99, 7);
    std::vector<double> vals(static_cast<std::size_t>(reps));
    for (auto& v : vals) {
        std::int64_t hits = 0;
        std::int64_t todo = n;
        while (todo > 0) {
            std::uint64_t word = rng();
            const int chunk = static_cast<int>(std::min<std::int64_t>(32, todo));
            for (int i = 0; i < chunk; ++i) {
                hits += (word & 3u) == 0;
                word >>= 2;
            }
            todo -= chunk;
        }
        const double ph = static_cast<double>(hits) / static_cast<double>(n);
        const double pl = ph > 0 ? ph * std::log(ph) : 0.0;
        v = pl * pl;
    }
    const double se = standard_error(vals);
    CHECK(std::abs(mean(vals) - series_expectation_p2log2p(p, n, 6)) <= 3 * se);
}

TEST_CASE("series cross expectation matches a multinomial Monte Carlo mean") {
    const double p1 = 0.3, p2 = 0.2;
    const std::int64_t n = 500, reps = 1000000;
    const std::vector<double> probs{p1, p2, 1 - p1 - p2};
    auto rng = derive_stream(99, 8);
    std::vector<double> vals(static_cast<std::size_t>(reps));
    std::vector<std::int64_t> counts;
    for (auto& v : vals) {
        counts.assign(3, 0);
        for (std::int64_t i = 0; i < n; ++i) {
            const double u = next_double(rng);
            ++counts[u < p1 ? 0 : (u < p1 + p2 ? 1 : 2)];
        }
        const double a = static_cast<double>(counts[0]) / static_cast<double>(n);
        const double b = static_cast<double>(counts[1]) / static_cast<double>(n);
        v = (a > 0 ? a * std::log(a) : 0.0) * (b > 0 ? b * std::log(b) : 0.0);
    }
    const double se = standard_error(vals);
    CHECK(std::abs(mean(vals) - series_expectation_cross(p1, p2, n, 6)) <= 3 * se);
}
