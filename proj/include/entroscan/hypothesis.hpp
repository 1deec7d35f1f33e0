// Two-sample equal-entropy test: z-score per Eq. (H2-H1)/sqrt(Var2+Var1),
// thresholded against empirically calibrated |z| quantiles rather than
// normal quantiles (the near-maximum-entropy regime is not normal).
#pragma once

#include "entroscan/entropy.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace entroscan {

// Shipped defaults calibrated at N = 2e4 simulations, n = 2e5, k = 7,
// four symbols, analytic uniform variance.
inline constexpr double kDefaultQ99 = 3.30722;
inline constexpr double kDefaultQ95 = 2.54542;

enum class QuantileSource { paper_default, calibrated };
enum class VarianceMode { analytic_uniform, plugin };

struct QuantileTable {
    double q95 = kDefaultQ95;
    double q99 = kDefaultQ99;
    struct Calibration {
        std::int64_t sims = 0;
        std::int64_t n = 0;
        int k = 0;
        std::int64_t alphabet_size = 0;
        std::uint64_t seed = 0;
        VarianceMode variance_mode = VarianceMode::analytic_uniform;
        bool below_min_length = false;  // n < min_length(alphabet^k) in analytic mode
        std::int64_t skipped = 0;       // degenerate pairs (zero combined variance)
    } calibration;
    QuantileSource source = QuantileSource::paper_default;
};

QuantileTable default_quantiles();

enum class Direction { none, increase, decrease };

struct TestResult {
    double z = 0;
    bool significant = false;
    Direction direction = Direction::none;
    double quantile_used = 0;
    std::pair<std::int64_t, std::int64_t> window_a{0, 0};
    std::pair<std::int64_t, std::int64_t> window_b{0, 0};
};

// (H2 - H1) / sqrt(Var2 + Var1); throws when both variances are zero.
double z_score(const EntropyEstimate& est1, const EntropyEstimate& est2);

// est2 is the later window: direction increase means z > 0.
TestResult test_equal_entropy(const EntropyEstimate& est1, const EntropyEstimate& est2, double quantile);

// Simulates `sims` independent pairs of uniform sequences and returns the
// nearest-rank 95th/99th percentiles of |z|.
QuantileTable calibrate_quantiles(std::int64_t n, int k, std::int64_t alphabet_size, std::int64_t sims,
                                  std::uint64_t seed, VarianceMode variance_mode);

std::string to_string(Direction d);
std::string to_string(VarianceMode m);
std::string to_string(QuantileSource s);

// Flat key=value serialization with full calibration provenance.
void save_quantile_table(const QuantileTable& table, const std::string& path);
QuantileTable load_quantile_table(const std::string& path);

}  // namespace entroscan
