// Price-series ingestion, log-returns, quartile discretization, rolling
// change-detection scan, and report emission. Data-regularity filtering
// (intraday volatility, microstructure noise, staleness) is out of scope:
// supply pre-filtered returns when reading results as market efficiency.
#pragma once

#include "entroscan/bandwidth.hpp"
#include "entroscan/entropy.hpp"
#include "entroscan/hypothesis.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace entroscan {

struct PriceSeries {
    std::vector<std::int64_t> timestamps;  // epoch seconds, strictly increasing
    std::vector<double> prices;            // strictly positive
    std::vector<std::string> labels;       // timestamp text as read from the file
};

// Accepts epoch-second integers or ISO-8601 "YYYY-MM-DD[ T]HH:MM[:SS]"
// (date-only allowed); times are treated as UTC.
std::int64_t parse_timestamp(const std::string& text);

// CSV with header "timestamp,price". Fails with the offending line number on
// bad rows, non-positive prices, or unsorted timestamps.
PriceSeries load_price_csv(const std::string& path);
void write_price_csv(const PriceSeries& series, const std::string& path);

std::vector<double> log_returns(const PriceSeries& series);

struct QuartileThresholds {
    double q1 = 0, q2 = 0, q3 = 0;
    bool degenerate = false;  // q1 == q3
    std::int64_t n_fit = 0;
    std::string training_range;
};

// Nearest-rank 25th/50th/75th percentiles.
QuartileThresholds fit_quartiles(std::span<const double> returns);

// 4-symbol alphabet: <=Q1 -> 0, (Q1,Q2] -> 1, (Q2,Q3] -> 2, >Q3 -> 3.
SymbolSequence discretize(std::span<const double> returns, const QuartileThresholds& thresholds);

struct ScanRecord {
    std::int64_t pos = 0;      // exclusive end of the later window in symbols
    std::string time_label;    // empty when no price metadata is attached
    double entropy = 0;        // later window
    double variance = 0;       // later window
    double z = 0;
    bool significant = false;
    Direction direction = Direction::none;
    bool untestable = false;   // both window variances clamped to zero
};

struct ScanParams {
    std::int64_t w = 0;
    int k = 0;
    double quantile = 0;
    std::int64_t step = 1;
    bool w_was_optimized = false;
    std::optional<double> f_wopt;
    std::int64_t n_max = 0;
    bool stationary_verdict = false;
    std::optional<QuartileThresholds> thresholds;
};

struct ScanSummary {
    std::int64_t n_tests = 0;
    std::int64_t n_increase = 0;
    std::int64_t n_decrease = 0;
    std::int64_t n_untestable = 0;
};

struct ScanReport {
    ScanParams params;
    ScanSummary summary;
    std::vector<ScanRecord> records;
};

// For each position t in {2w, 2w+step, ...} <= length, compares the windows
// [t-2w, t-w) and [t-w, t). Windows share no blocks.
ScanReport rolling_scan(const SymbolSequence& seq, std::int64_t w, int k, double quantile, std::int64_t step = 1);

struct AnalyzeOptions {
    std::int64_t train_begin = 0;  // ranges are half-open [begin, end)
    std::int64_t train_end = 0;
    std::int64_t test_begin = 0;
    std::int64_t test_end = 0;
    int k = 4;
    double quantile = kDefaultQ99;
    std::optional<std::int64_t> w;  // bypasses the bandwidth search when set
    std::int64_t step = 1;
};

// Fits quartiles on training returns, discretizes both ranges with the
// training thresholds, optimizes the bandwidth on the training symbols when
// w is absent, and scans the testing symbols.
ScanReport analyze(const std::string& prices_csv_path, const AnalyzeOptions& options);
ScanReport analyze(const PriceSeries& prices, const AnalyzeOptions& options);

// Writes report.csv, report_points.csv (significant records only), and
// params.json under out_dir.
void write_report(const ScanReport& report, const std::string& out_dir);

// Maximal runs of consecutive significant-decrease records, as half-open
// position ranges [first_pos, last_pos].
std::vector<std::pair<std::int64_t, std::int64_t>> decrease_runs(const ScanReport& report);

}  // namespace entroscan
