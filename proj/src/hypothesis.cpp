#include "entroscan/hypothesis.hpp"

#include "entroscan/rng.hpp"
#include "entroscan/simulate.hpp"
#include "entroscan/stats_util.hpp"
#include "entroscan/variance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <vector>

namespace entroscan {

QuantileTable default_quantiles() { return QuantileTable{}; }

double z_score(const EntropyEstimate& est1, const EntropyEstimate& est2) {
    const double combined = est1.variance + est2.variance;
    if (!(combined > 0)) throw std::invalid_argument("z_score: combined variance must be positive");
    return (est2.value - est1.value) / std::sqrt(combined);
}

TestResult test_equal_entropy(const EntropyEstimate& est1, const EntropyEstimate& est2, double quantile) {
    if (!(quantile > 0)) throw std::invalid_argument("test_equal_entropy: quantile must be positive");
    TestResult r;
    r.z = z_score(est1, est2);
    r.quantile_used = quantile;
    r.significant = std::abs(r.z) > quantile;
    r.direction = !r.significant ? Direction::none : (r.z > 0 ? Direction::increase : Direction::decrease);
    return r;
}

QuantileTable calibrate_quantiles(std::int64_t n, int k, std::int64_t alphabet_size, std::int64_t sims,
                                  std::uint64_t seed, VarianceMode variance_mode) {
    if (sims < 100) throw std::invalid_argument("calibrate_quantiles: sims >= 100 required");
    if (n < 1 || k < 1 || alphabet_size < 2) throw std::invalid_argument("calibrate_quantiles: bad parameters");
    if (n < k) throw std::invalid_argument("calibrate_quantiles: n >= k required");

    std::int64_t m = 1;
    for (int i = 0; i < k; ++i) {
        if (m > (std::int64_t{1} << 62) / alphabet_size) {
            throw std::invalid_argument("calibrate_quantiles: alphabet^k overflows");
        }
        m *= alphabet_size;
    }

    QuantileTable table;
    table.source = QuantileSource::calibrated;
    table.calibration = {sims, n, k, alphabet_size, seed, variance_mode, false};
    if (variance_mode == VarianceMode::analytic_uniform && m >= 2 && n < min_length(m)) {
        // The analytic-variance rule asks for n >= n_min; shorter sequences
        // still calibrate but the provenance records the shortfall.
        table.calibration.below_min_length = true;
    }

    const double analytic_var = variance_max(m, n, k);
    std::vector<double> abs_z;
    abs_z.reserve(static_cast<std::size_t>(sims));
    for (std::int64_t sim = 0; sim < sims; ++sim) {
        auto rng_a = derive_stream(seed, static_cast<std::uint64_t>(sim), 0);
        auto rng_b = derive_stream(seed, static_cast<std::uint64_t>(sim), 1);
        const SymbolSequence seq_a = gen_uniform(n, alphabet_size, rng_a);
        const SymbolSequence seq_b = gen_uniform(n, alphabet_size, rng_b);
        const BlockCounts counts_a = count_blocks(seq_a, k);
        const BlockCounts counts_b = count_blocks(seq_b, k);

        EntropyEstimate est_a, est_b;
        if (variance_mode == VarianceMode::analytic_uniform) {
            est_a.value = entropy_plugin(counts_a);
            est_b.value = entropy_plugin(counts_b);
            est_a.variance = est_b.variance = analytic_var;
        } else {
            est_a = estimate_entropy(counts_a);
            est_b = estimate_entropy(counts_b);
        }
        if (est_a.variance + est_b.variance <= 0) {
            // both plug-in variances clamped: the pair is untestable
            ++table.calibration.skipped;
            continue;
        }
        abs_z.push_back(std::abs(z_score(est_a, est_b)));
    }
    if (abs_z.empty()) throw std::runtime_error("calibrate_quantiles: every simulated pair was degenerate");
    table.q95 = percentile_nearest_rank(abs_z, 0.95);
    table.q99 = percentile_nearest_rank(abs_z, 0.99);
    return table;
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::increase: return "increase";
        case Direction::decrease: return "decrease";
        default: return "none";
    }
}

std::string to_string(VarianceMode m) {
    return m == VarianceMode::analytic_uniform ? "analytic" : "plugin";
}

std::string to_string(QuantileSource s) {
    return s == QuantileSource::paper_default ? "paper_default" : "calibrated";
}

void save_quantile_table(const QuantileTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write quantile table: " + path);
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "q95=" << num(table.q95) << "\n";
    out << "q99=" << num(table.q99) << "\n";
    out << "source=" << to_string(table.source) << "\n";
    out << "sims=" << table.calibration.sims << "\n";
    out << "n=" << table.calibration.n << "\n";
    out << "k=" << table.calibration.k << "\n";
    out << "alphabet=" << table.calibration.alphabet_size << "\n";
    out << "seed=" << table.calibration.seed << "\n";
    out << "variance=" << to_string(table.calibration.variance_mode) << "\n";
    out << "below_min_length=" << (table.calibration.below_min_length ? 1 : 0) << "\n";
    out << "skipped=" << table.calibration.skipped << "\n";
    out << "percentile_rule=nearest_rank\n";
}

QuantileTable load_quantile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read quantile table: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    QuantileTable t;
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error("quantile table missing field: " + key);
        return it->second;
    };
    t.q95 = std::stod(need("q95"));
    t.q99 = std::stod(need("q99"));
    t.source = need("source") == "calibrated" ? QuantileSource::calibrated : QuantileSource::paper_default;
    if (kv.count("sims")) t.calibration.sims = std::stoll(kv["sims"]);
    if (kv.count("n")) t.calibration.n = std::stoll(kv["n"]);
    if (kv.count("k")) t.calibration.k = std::stoi(kv["k"]);
    if (kv.count("alphabet")) t.calibration.alphabet_size = std::stoll(kv["alphabet"]);
    if (kv.count("seed")) t.calibration.seed = std::stoull(kv["seed"]);
    if (kv.count("variance")) {
        t.calibration.variance_mode =
            kv["variance"] == "plugin" ? VarianceMode::plugin : VarianceMode::analytic_uniform;
    }
    if (kv.count("below_min_length")) t.calibration.below_min_length = kv["below_min_length"] == "1";
    if (kv.count("skipped")) t.calibration.skipped = std::stoll(kv["skipped"]);
    if (!(t.q99 > t.q95) || !(t.q95 > 0)) throw std::runtime_error("quantile table invariant violated: q99 > q95 > 0");
    return t;
}

}  // namespace entroscan
