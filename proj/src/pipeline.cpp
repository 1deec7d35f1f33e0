#include "entroscan/pipeline.hpp"

#include "entroscan/rolling.hpp"
#include "entroscan/stats_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace entroscan {

namespace {

// days since 1970-01-01 for a civil date (Howard Hinnant's algorithm)
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u + static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::int64_t parse_timestamp(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty()) throw std::invalid_argument("empty timestamp");
    const bool plain_int = text.find_first_not_of("0123456789-+") == std::string::npos &&
                           text.find_first_of("0123456789") != std::string::npos &&
                           text.find('-', 1) == std::string::npos;
    if (plain_int) {
        return std::stoll(text);
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int fields = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (fields >= 4 && sep != ' ' && sep != 'T') fields = 3;
    if (fields != 3 && fields != 6 && fields != 7) {
        throw std::invalid_argument("unparseable timestamp: " + text);
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) {
        throw std::invalid_argument("timestamp out of range: " + text);
    }
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

PriceSeries load_price_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open price file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty price file: " + path);
    {
        std::string header = trim(line);
        std::transform(header.begin(), header.end(), header.begin(), [](unsigned char c) { return std::tolower(c); });
        if (header != "timestamp,price") {
            throw std::runtime_error("price file must start with header 'timestamp,price': " + path);
        }
    }
    PriceSeries out;
    std::int64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'timestamp,price'");
        }
        const std::string ts_text = trim(row.substr(0, comma));
        const std::string price_text = trim(row.substr(comma + 1));
        std::int64_t ts;
        double price;
        try {
            ts = parse_timestamp(ts_text);
            std::size_t used = 0;
            price = std::stod(price_text, &used);
            if (used != price_text.size()) throw std::invalid_argument("trailing garbage");
        } catch (const std::exception& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!(price > 0) || !std::isfinite(price)) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": price must be positive, got " + price_text);
        }
        if (!out.timestamps.empty() && ts <= out.timestamps.back()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": timestamps must be strictly increasing");
        }
        out.timestamps.push_back(ts);
        out.prices.push_back(price);
        out.labels.push_back(ts_text);
    }
    if (out.prices.empty()) throw std::runtime_error("price file has no data rows: " + path);
    return out;
}

void write_price_csv(const PriceSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write price file: " + path);
    out << "timestamp,price\n";
    for (std::size_t i = 0; i < series.prices.size(); ++i) {
        const std::string& label =
            i < series.labels.size() && !series.labels[i].empty() ? series.labels[i] : std::to_string(series.timestamps[i]);
        out << label << "," << format_double(series.prices[i]) << "\n";
    }
}

std::vector<double> log_returns(const PriceSeries& series) {
    if (series.prices.size() < 2) throw std::invalid_argument("log_returns: need at least 2 prices");
    std::vector<double> out(series.prices.size() - 1);
    for (std::size_t i = 1; i < series.prices.size(); ++i) {
        out[i - 1] = std::log(series.prices[i] / series.prices[i - 1]);
    }
    return out;
}

QuartileThresholds fit_quartiles(std::span<const double> returns) {
    if (returns.size() < 4) throw std::invalid_argument("fit_quartiles: need at least 4 returns");
    std::vector<double> sorted(returns.begin(), returns.end());
    QuartileThresholds t;
    t.q1 = percentile_nearest_rank(sorted, 0.25);
    t.q2 = percentile_nearest_rank(sorted, 0.50);
    t.q3 = percentile_nearest_rank(sorted, 0.75);
    t.degenerate = t.q1 == t.q3;
    t.n_fit = static_cast<std::int64_t>(returns.size());
    return t;
}

SymbolSequence discretize(std::span<const double> returns, const QuartileThresholds& thresholds) {
    if (!(thresholds.q1 <= thresholds.q2 && thresholds.q2 <= thresholds.q3)) {
        throw std::invalid_argument("discretize: thresholds must be ordered");
    }
    SymbolSequence seq;
    seq.alphabet_size = 4;
    seq.symbols.reserve(returns.size());
    for (double r : returns) {
        std::int32_t s;
        if (r <= thresholds.q1) {
            s = 0;
        } else if (r <= thresholds.q2) {
            s = 1;
        } else if (r <= thresholds.q3) {
            s = 2;
        } else {
            s = 3;
        }
        seq.symbols.push_back(s);
    }
    return seq;
}

ScanReport rolling_scan(const SymbolSequence& seq, std::int64_t w, int k, double quantile, std::int64_t step) {
    const std::int64_t n = seq.length();
    if (w < k || 2 * w > n) throw std::invalid_argument("rolling_scan: need k <= w and 2w <= length");
    if (step < 1) throw std::invalid_argument("rolling_scan: step >= 1 required");
    if (!(quantile > 0)) throw std::invalid_argument("rolling_scan: quantile must be positive");

    ScanReport report;
    report.params.w = w;
    report.params.k = k;
    report.params.quantile = quantile;
    report.params.step = step;
    report.params.n_max = (n - k + 1) / 2;

    RollingWindow earlier(seq, k, 0, w);
    RollingWindow later(seq, k, w, w);
    for (std::int64_t t = 2 * w; t <= n; t += step) {
        while (earlier.start() < t - 2 * w) {
            earlier.advance();
            later.advance();
        }
        const EntropyEstimate a = earlier.estimate();
        const EntropyEstimate b = later.estimate();
        ScanRecord rec;
        rec.pos = t;
        rec.entropy = b.value;
        rec.variance = b.variance;
        if (a.variance + b.variance <= 0) {
            rec.untestable = true;
            ++report.summary.n_untestable;
        } else {
            const TestResult res = test_equal_entropy(a, b, quantile);
            rec.z = res.z;
            rec.significant = res.significant;
            rec.direction = res.direction;
            ++report.summary.n_tests;
            if (rec.direction == Direction::increase) ++report.summary.n_increase;
            if (rec.direction == Direction::decrease) ++report.summary.n_decrease;
        }
        report.records.push_back(std::move(rec));
    }
    return report;
}

namespace {

std::pair<std::size_t, std::size_t> row_range(const PriceSeries& prices, std::int64_t begin, std::int64_t end) {
    const auto& ts = prices.timestamps;
    const auto lo = std::lower_bound(ts.begin(), ts.end(), begin) - ts.begin();
    const auto hi = std::lower_bound(ts.begin(), ts.end(), end) - ts.begin();
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

std::vector<double> range_returns(const PriceSeries& prices, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) throw std::invalid_argument("analyze: range selects fewer than 2 prices");
    std::vector<double> out(hi - lo - 1);
    for (std::size_t i = lo + 1; i < hi; ++i) out[i - lo - 1] = std::log(prices.prices[i] / prices.prices[i - 1]);
    return out;
}

}  // namespace

ScanReport analyze(const PriceSeries& prices, const AnalyzeOptions& options) {
    if (!(options.train_begin < options.train_end) || !(options.test_begin < options.test_end)) {
        throw std::invalid_argument("analyze: ranges must be non-empty");
    }
    if (options.train_end > options.test_begin) {
        throw std::invalid_argument("analyze: training range must precede the testing range");
    }
    const auto [train_lo, train_hi] = row_range(prices, options.train_begin, options.train_end);
    const auto [test_lo, test_hi] = row_range(prices, options.test_begin, options.test_end);

    const std::vector<double> train_returns = range_returns(prices, train_lo, train_hi);
    const std::vector<double> test_returns = range_returns(prices, test_lo, test_hi);

    QuartileThresholds thresholds = fit_quartiles(train_returns);
    thresholds.training_range = prices.labels[train_lo] + ".." + prices.labels[train_hi - 1];

    // The testing range is always discretized with training-set thresholds.
    const SymbolSequence train_syms = discretize(train_returns, thresholds);
    const SymbolSequence test_syms = discretize(test_returns, thresholds);

    std::int64_t w;
    std::optional<double> f_wopt;
    bool stationary = false;
    std::int64_t n_max = default_bandwidth_ceiling(train_syms, options.k);
    if (options.w) {
        w = *options.w;
    } else {
        const std::int64_t floor = default_bandwidth_floor(train_syms, options.k);
        if (floor >= n_max) {
            throw std::invalid_argument("analyze: training range too short for a bandwidth search");
        }
        const BandwidthResult bw = optimize_bandwidth(train_syms, options.k, options.quantile, floor, n_max);
        w = bw.w_opt;
        f_wopt = bw.objective_value;
        stationary = bw.stationary_verdict;
    }

    ScanReport report = rolling_scan(test_syms, w, options.k, options.quantile, options.step);
    report.params.w_was_optimized = !options.w.has_value();
    report.params.f_wopt = f_wopt;
    report.params.n_max = n_max;
    report.params.stationary_verdict = stationary;
    report.params.thresholds = thresholds;

    // Scan position t ends at symbol t-1 = return index t-1, whose timestamp
    // is the price row test_lo + t.
    for (auto& rec : report.records) {
        rec.time_label = prices.labels[test_lo + static_cast<std::size_t>(rec.pos)];
    }
    return report;
}

ScanReport analyze(const std::string& prices_csv_path, const AnalyzeOptions& options) {
    return analyze(load_price_csv(prices_csv_path), options);
}

void write_report(const ScanReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream out(fs::path(out_dir) / "report.csv");
        if (!out) throw std::runtime_error("cannot write report.csv under " + out_dir);
        out << "time,entropy,variance,z,significant,direction\n";
        for (const auto& rec : report.records) {
            const std::string time = rec.time_label.empty() ? std::to_string(rec.pos) : rec.time_label;
            out << time << "," << format_double(rec.entropy) << "," << format_double(rec.variance) << ","
                << format_double(rec.z) << "," << (rec.significant ? 1 : 0) << "," << to_string(rec.direction)
                << "\n";
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "report_points.csv");
        if (!out) throw std::runtime_error("cannot write report_points.csv under " + out_dir);
        out << "time,entropy,z,direction\n";
        for (const auto& rec : report.records) {
            if (!rec.significant) continue;
            const std::string time = rec.time_label.empty() ? std::to_string(rec.pos) : rec.time_label;
            out << time << "," << format_double(rec.entropy) << "," << format_double(rec.z) << ","
                << to_string(rec.direction) << "\n";
        }
    }
    {
        nlohmann::json params;
        params["w"] = report.params.w;
        params["k"] = report.params.k;
        params["quantile"] = report.params.quantile;
        params["step"] = report.params.step;
        params["w_was_optimized"] = report.params.w_was_optimized;
        if (report.params.f_wopt) params["f_wopt"] = *report.params.f_wopt;
        params["n_max"] = report.params.n_max;
        params["stationary_verdict"] = report.params.stationary_verdict;
        params["n_tests"] = report.summary.n_tests;
        params["n_increase"] = report.summary.n_increase;
        params["n_decrease"] = report.summary.n_decrease;
        params["n_untestable"] = report.summary.n_untestable;
        if (report.params.thresholds) {
            params["q1"] = report.params.thresholds->q1;
            params["q2"] = report.params.thresholds->q2;
            params["q3"] = report.params.thresholds->q3;
            params["thresholds_degenerate"] = report.params.thresholds->degenerate;
            params["thresholds_n_fit"] = report.params.thresholds->n_fit;
            params["thresholds_range"] = report.params.thresholds->training_range;
            params["thresholds_source"] = "training";
        }
        params["percentile_rule"] = "nearest_rank";
        std::ofstream out(fs::path(out_dir) / "params.json");
        if (!out) throw std::runtime_error("cannot write params.json under " + out_dir);
        out << params.dump(2) << "\n";
    }
}

std::vector<std::pair<std::int64_t, std::int64_t>> decrease_runs(const ScanReport& report) {
    std::vector<std::pair<std::int64_t, std::int64_t>> runs;
    bool open = false;
    for (const auto& rec : report.records) {
        if (rec.direction == Direction::decrease) {
            if (!open) {
                runs.emplace_back(rec.pos, rec.pos);
                open = true;
            } else {
                runs.back().second = rec.pos;
            }
        } else {
            open = false;
        }
    }
    return runs;
}

}  // namespace entroscan
