// Seeded generators for the synthetic processes used in the simulation
// studies, plus the size/power experiment harnesses.
#pragma once

#include "entroscan/entropy.hpp"

#include <cstdint>
#include <random>

namespace entroscan {

// First-order chain over `alphabet_size` symbols that repeats the previous
// symbol with probability tau; the other symbols are equiprobable. tau equal
// to 1/alphabet_size is the i.i.d. uniform (maximum entropy) case.
struct TauProcessSpec {
    double tau = 0.25;
    std::int64_t alphabet_size = 4;
    std::int64_t length = 0;
    std::uint64_t seed = 0;
};

// uniform(head) || tau-process(middle) || uniform(rest); segments draw from
// independent streams derived from the master seed.
struct StepwiseSpec {
    std::int64_t total_length = 0;
    std::int64_t middle_length = 0;
    double middle_tau = 0.5;
    std::uint64_t seed = 0;
    std::int64_t alphabet_size = 4;
    static constexpr std::int64_t kHeadLength = 10000;
};

SymbolSequence gen_uniform(std::int64_t length, std::int64_t alphabet_size, std::uint64_t seed);
// Stream-reusing overload for harnesses that manage their own substreams.
SymbolSequence gen_uniform(std::int64_t length, std::int64_t alphabet_size, std::mt19937_64& rng);

SymbolSequence gen_tau_process(const TauProcessSpec& spec);
SymbolSequence gen_tau_process(const TauProcessSpec& spec, std::mt19937_64& rng);

SymbolSequence gen_stepwise(const StepwiseSpec& spec);

// 4th-order entropy of the tau process as printed: -2(tau ln(tau/4) + (1-tau) ln((1-tau)/12))
double h_tau(double tau);

// Fraction of `trials` in which the equal-entropy test rejects for two
// independent uniform sequences (plug-in variances).
double run_size_experiment(std::int64_t trials, std::int64_t n, int k, double quantile, std::uint64_t seed,
                           std::int64_t alphabet_size = 4);

// Same, with one uniform sequence against one tau-process sequence.
double run_power_experiment(double tau, std::int64_t trials, std::int64_t n, int k, double quantile,
                            std::uint64_t seed, std::int64_t alphabet_size = 4);

}  // namespace entroscan
