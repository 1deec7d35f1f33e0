#include "entroscan/hypothesis.hpp"

#include "entroscan/rng.hpp"
#include "entroscan/simulate.hpp"
#include "entroscan/variance.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <vector>

using namespace entroscan;

namespace {

EntropyEstimate make_est(double value, double variance) {
    EntropyEstimate est;
    est.value = value;
    est.variance = variance;
    return est;
}

}  // namespace

TEST_CASE("z-score fixtures") {
    const auto a = make_est(5.54, 2e-5);
    CHECK(z_score(a, a) == 0.0);

    const auto b = make_est(5.52, 2e-5);
    CHECK(z_score(a, b) == doctest::Approx(-0.02 / std::sqrt(4e-5)).epsilon(1e-12));
    CHECK(z_score(a, b) == doctest::Approx(-3.16228).epsilon(1e-5));

    // antisymmetry
    auto rng = derive_stream(3, 0);
    for (int i = 0; i < 200; ++i) {
        const auto x = make_est(next_double(rng) * 6, 1e-6 + next_double(rng) * 1e-3);
        const auto y = make_est(next_double(rng) * 6, 1e-6 + next_double(rng) * 1e-3);
        CHECK(z_score(x, y) == doctest::Approx(-z_score(y, x)).epsilon(1e-12));
    }

    CHECK_THROWS(z_score(make_est(1.0, 0.0), make_est(2.0, 0.0)));
}

TEST_CASE("test_equal_entropy threshold logic") {
    const double q = kDefaultQ99;
    const auto base = make_est(5.0, 1e-4);

    const TestResult same = test_equal_entropy(base, base, q);
    CHECK_FALSE(same.significant);
    CHECK(same.direction == Direction::none);
    CHECK(same.z == 0.0);
    CHECK(same.quantile_used == q);

    // z = -3.5: significant decrease
    const auto lower = make_est(5.0 - 3.5 * std::sqrt(2e-4), 1e-4);
    const TestResult dec = test_equal_entropy(base, lower, q);
    CHECK(dec.z == doctest::Approx(-3.5).epsilon(1e-12));
    CHECK(dec.significant);
    CHECK(dec.direction == Direction::decrease);

    const auto higher = make_est(5.0 + 3.5 * std::sqrt(2e-4), 1e-4);
    const TestResult inc = test_equal_entropy(base, higher, q);
    CHECK(inc.significant);
    CHECK(inc.direction == Direction::increase);

    CHECK_THROWS(test_equal_entropy(base, base, 0.0));
}

TEST_CASE("significance is strict exceedance and direction tracks it") {
    auto rng = derive_stream(4, 0);
    for (int i = 0; i < 300; ++i) {
        const auto x = make_est(next_double(rng) * 6, 1e-6 + next_double(rng) * 1e-4);
        const auto y = make_est(next_double(rng) * 6, 1e-6 + next_double(rng) * 1e-4);
        const double q = 0.5 + next_double(rng) * 3;
        const TestResult r = test_equal_entropy(x, y, q);
        CHECK(r.significant == (std::abs(r.z) > q));
        CHECK((r.direction != Direction::none) == r.significant);
        if (r.significant) CHECK((r.direction == Direction::increase) == (r.z > 0));
    }
}

TEST_CASE("|z| is strictly increasing in |H2 - H1| at fixed variances") {
    const auto base = make_est(4.0, 3e-5);
    double last = -1;
    for (double delta : {0.0, 1e-4, 5e-4, 2e-3, 1e-2, 0.1}) {
        const double az = std::abs(z_score(base, make_est(4.0 + delta, 5e-5)));
        CHECK(az > last);
        last = az;
    }
}

TEST_CASE("default quantile table") {
    const QuantileTable t = default_quantiles();
    CHECK(t.q99 == doctest::Approx(3.30722));
    CHECK(t.q95 == doctest::Approx(2.54542));
    CHECK(t.q99 > t.q95);
    CHECK(t.q95 > 0);
    CHECK(t.source == QuantileSource::paper_default);
}

TEST_CASE("nearest-rank quantiles are attained sample values") {
    const QuantileTable t = calibrate_quantiles(400, 2, 4, 100, 99, VarianceMode::plugin);
    CHECK(t.q99 >= t.q95);
    CHECK(t.source == QuantileSource::calibrated);
    CHECK(t.calibration.sims == 100);

    // re-simulate the same pairs and confirm both quantiles occur among |z|
    int hit95 = 0, hit99 = 0;
    std::int64_t skipped = 0;
    for (int sim = 0; sim < 100; ++sim) {
        auto rng_a = derive_stream(99, static_cast<std::uint64_t>(sim), 0);
        auto rng_b = derive_stream(99, static_cast<std::uint64_t>(sim), 1);
        const auto seq_a = gen_uniform(400, 4, rng_a);
        const auto seq_b = gen_uniform(400, 4, rng_b);
        const auto est_a = estimate_entropy(count_blocks(seq_a, 2));
        const auto est_b = estimate_entropy(count_blocks(seq_b, 2));
        if (est_a.variance + est_b.variance <= 0) {
            ++skipped;
            continue;
        }
        const double az = std::abs(z_score(est_a, est_b));
        if (az == t.q95) ++hit95;
        if (az == t.q99) ++hit99;
    }
    CHECK(hit95 >= 1);
    CHECK(hit99 >= 1);
    CHECK(t.calibration.skipped == skipped);
}

TEST_CASE("calibration validates parameters") {
    CHECK_THROWS(calibrate_quantiles(400, 2, 4, 50, 1, VarianceMode::plugin));   // sims < 100
    CHECK_THROWS(calibrate_quantiles(0, 2, 4, 100, 1, VarianceMode::plugin));
    CHECK_THROWS(calibrate_quantiles(400, 2, 1, 100, 1, VarianceMode::plugin));  // alphabet < 2
}

TEST_CASE("analytic calibration records a min-length shortfall in provenance") {
    const QuantileTable t = calibrate_quantiles(100, 2, 4, 100, 5, VarianceMode::analytic_uniform);
    CHECK(t.calibration.below_min_length == (100 < min_length(16)));
    const QuantileTable ok = calibrate_quantiles(400, 2, 4, 100, 5, VarianceMode::analytic_uniform);
    CHECK_FALSE(ok.calibration.below_min_length);  // min_length(16) = 115 <= 400
}

TEST_CASE("quantile table round-trips through the key=value file") {
    const QuantileTable t = calibrate_quantiles(300, 2, 4, 120, 42, VarianceMode::analytic_uniform);
    const auto path = (std::filesystem::temp_directory_path() / "entroscan_qtable.txt").string();
    save_quantile_table(t, path);
    const QuantileTable back = load_quantile_table(path);
    CHECK(back.q95 == t.q95);
    CHECK(back.q99 == t.q99);
    CHECK(back.source == t.source);
    CHECK(back.calibration.sims == t.calibration.sims);
    CHECK(back.calibration.n == t.calibration.n);
    CHECK(back.calibration.k == t.calibration.k);
    CHECK(back.calibration.alphabet_size == t.calibration.alphabet_size);
    CHECK(back.calibration.seed == t.calibration.seed);
    CHECK(back.calibration.variance_mode == t.calibration.variance_mode);
    std::filesystem::remove(path);
}

TEST_CASE("direction is invariant under simultaneous relabeling") {
    const std::vector<std::int32_t> perm{3, 1, 0, 2};
    auto relabel = [&](SymbolSequence s) {
        for (auto& x : s.symbols) x = perm[static_cast<std::size_t>(x)];
        return s;
    };
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto a = gen_uniform(1500, 4, seed * 2 + 1);
        const auto b = gen_tau_process(TauProcessSpec{0.45, 4, 1500, seed * 2 + 2});
        const auto res = test_equal_entropy(estimate_entropy(count_blocks(a, 3)),
                                            estimate_entropy(count_blocks(b, 3)), kDefaultQ95);
        const auto res_rel = test_equal_entropy(estimate_entropy(count_blocks(relabel(a), 3)),
                                                estimate_entropy(count_blocks(relabel(b), 3)), kDefaultQ95);
        CHECK(res.direction == res_rel.direction);
        CHECK(res.z == doctest::Approx(res_rel.z).epsilon(1e-9));
    }
}
