// entroscan: time-varying Shannon entropy estimation, change testing,
// bandwidth selection, and the synthetic experiment harnesses.
#include "entroscan/bandwidth.hpp"
#include "entroscan/entropy.hpp"
#include "entroscan/hypothesis.hpp"
#include "entroscan/moments.hpp"
#include "entroscan/pipeline.hpp"
#include "entroscan/rng.hpp"
#include "entroscan/sequence_io.hpp"
#include "entroscan/simulate.hpp"
#include "entroscan/stats_util.hpp"
#include "entroscan/variance.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace entroscan;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::vector<double> parse_probs(const std::string& arg) {
    std::vector<double> probs;
    if (arg.find(',') != std::string::npos) {
        for (const auto& tok : split(arg, ',')) probs.push_back(std::stod(tok));
    } else {
        std::ifstream in(arg);
        if (!in) throw std::runtime_error("cannot open probability file: " + arg);
        double v;
        while (in >> v) probs.push_back(v);
    }
    if (probs.empty()) throw std::runtime_error("no probabilities given");
    return probs;
}

int run_moments(int m, int k, const std::string& eval_arg, int check_n_max) {
    const MomentOrder order{m, k};
    if (exceeds_series_budget(order)) {
        std::cerr << "note: total order " << m + k << " is beyond the order-6 series budget\n";
    }
    const MomentPolynomial poly = k == 0 ? binomial_central_moment(order) : multinomial_central_moment(order);
    std::cout << "mu_{" << m << "," << k << "} = " << poly.to_string() << "\n";

    if (!eval_arg.empty()) {
        auto parts = split(eval_arg, ',');
        Rational p1, p2(0);
        long long n;
        if (parts.size() == 3) {
            p1 = rational_from_decimal(parts[0]);
            p2 = rational_from_decimal(parts[1]);
            n = std::stoll(parts[2]);
        } else if (parts.size() == 2 && k == 0) {
            p1 = rational_from_decimal(parts[0]);
            n = std::stoll(parts[1]);
        } else {
            throw std::runtime_error("--eval expects p1,p2,n (or p,n for k = 0)");
        }
        const Rational value = poly.evaluate_exact(p1, p2, n);
        std::cout << "value at (p1=" << p1 << ", p2=" << p2 << ", n=" << n << ") = " << value << " ~ "
                  << to_double(value) << "\n";
    }

    if (check_n_max > 0) {
        const int n_hi = std::min(check_n_max, kBruteforceMaxN);
        double worst = 0;
        for (int n = 2; n <= n_hi; ++n) {
            for (int i = 1; i <= 9; ++i) {
                for (int j = 1; i + j <= 10; ++j) {
                    const Rational p1(i, 10), p2(j, 10);
                    std::vector<Rational> probs{p1, p2};
                    if (i + j < 10) probs.push_back(Rational(10 - i - j, 10));
                    const Rational brute = exact_moment_bruteforce(probs, n, order);
                    const Rational diff = poly.evaluate_exact(p1, p2, n) - brute;
                    worst = std::max(worst, std::abs(to_double(diff)));
                }
            }
        }
        std::cout << "bruteforce check up to n=" << n_hi << ": max |recursion - enumeration| = " << worst << "\n";
    }
    return 0;
}

void print_estimate(const EntropyEstimate& est, const PluginVariance& var) {
    std::printf("H = %.12g\n", est.value);
    std::printf("var = %.12g\n", est.variance);
    std::printf("var_raw = %.12g\n", var.raw);
    std::printf("k = %d\nn_eff = %lld\nM_hat = %lld\n", est.k, static_cast<long long>(est.n_eff),
                static_cast<long long>(est.m_hat));
    if (var.clamped) std::printf("warning: raw plug-in variance was negative, clamped to 0\n");
    if (var.below_min_length) {
        std::printf("warning: n_eff below min_length(M_hat) = %lld, some events may be unobserved\n",
                    static_cast<long long>(min_length(est.m_hat)));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-varying Shannon entropy estimation and change detection"};
    app.require_subcommand(1);

    // moments
    auto* cmd_moments = app.add_subcommand("moments", "Print a central-moment polynomial, evaluate it, or check it");
    int mom_m = 2, mom_k = 0, mom_check = 0;
    std::string mom_eval;
    cmd_moments->add_option("--m", mom_m, "moment order on p1")->required();
    cmd_moments->add_option("--k", mom_k, "moment order on p2 (0 = binomial)");
    cmd_moments->add_option("--eval", mom_eval, "evaluate at decimal p1,p2,n");
    cmd_moments->add_option("--check-bruteforce", mom_check, "compare with exact enumeration up to this n (<= 12)");

    // variance
    auto* cmd_variance = app.add_subcommand("variance", "Entropy-variance breakdown from probabilities or a sequence");
    std::string var_probs, var_seq;
    long long var_n = 0;
    int var_k = 1;
    std::optional<long long> var_alphabet;
    cmd_variance->add_option("--probs", var_probs, "inline comma-separated probabilities or a file (one per line)");
    cmd_variance->add_option("--n", var_n, "sequence length for the breakdown");
    cmd_variance->add_option("--seq", var_seq, "sequence file for the plug-in estimate");
    cmd_variance->add_option("--k", var_k, "block length for --seq");
    long long var_alpha_raw = 0;
    cmd_variance->add_option("--alphabet", var_alpha_raw, "alphabet size override for --seq");

    // calibrate
    auto* cmd_cal = app.add_subcommand("calibrate", "Monte Carlo calibration of the |z| quantiles");
    long long cal_n = 0, cal_alphabet = 4, cal_sims = 20000;
    int cal_k = 4;
    std::uint64_t cal_seed = 1;
    std::string cal_variance = "analytic", cal_out;
    cmd_cal->add_option("--n", cal_n, "sequence length")->required();
    cmd_cal->add_option("--k", cal_k, "block length")->required();
    cmd_cal->add_option("--alphabet", cal_alphabet, "alphabet size");
    cmd_cal->add_option("--sims", cal_sims, "number of simulated pairs");
    cmd_cal->add_option("--seed", cal_seed, "master seed");
    cmd_cal->add_option("--variance", cal_variance, "analytic|plugin")->check(CLI::IsMember({"analytic", "plugin"}));
    cmd_cal->add_option("--out", cal_out, "output quantile-table path")->required();

    // bandwidth
    auto* cmd_bw = app.add_subcommand("bandwidth", "Select the optimal rolling-window length");
    std::string bw_input, bw_out;
    int bw_k = 4;
    double bw_q99 = kDefaultQ99;
    long long bw_wmin = 0, bw_wmax = 0, bw_grid = 0, bw_alphabet = 0;
    cmd_bw->add_option("--input", bw_input, "sequence file")->required();
    cmd_bw->add_option("--k", bw_k, "block length");
    cmd_bw->add_option("--q99", bw_q99, "99% |z| quantile");
    cmd_bw->add_option("--wmin", bw_wmin, "search floor (default: min_length of observed blocks)");
    cmd_bw->add_option("--wmax", bw_wmax, "search ceiling (default: floor((n-k+1)/2))");
    cmd_bw->add_option("--grid", bw_grid, "exhaustive probing with this step instead of golden-section");
    cmd_bw->add_option("--alphabet", bw_alphabet, "alphabet size override");
    cmd_bw->add_option("--out", bw_out, "output path")->required();

    // simulate
    auto* cmd_sim = app.add_subcommand("simulate", "Generate a synthetic symbol sequence");
    std::string sim_mode, sim_out;
    long long sim_length = 0, sim_l = 0, sim_alphabet = 4;
    double sim_tau = 0.5;
    std::uint64_t sim_seed = 1;
    cmd_sim->add_option("--mode", sim_mode, "uniform|tau|stepwise")
        ->required()
        ->check(CLI::IsMember({"uniform", "tau", "stepwise"}));
    cmd_sim->add_option("--length", sim_length, "total length")->required();
    cmd_sim->add_option("--tau", sim_tau, "repeat probability for tau/stepwise modes");
    cmd_sim->add_option("--l", sim_l, "middle-segment length for stepwise mode");
    cmd_sim->add_option("--alphabet", sim_alphabet, "alphabet size");
    cmd_sim->add_option("--seed", sim_seed, "master seed");
    cmd_sim->add_option("--out", sim_out, "output sequence file")->required();

    // experiment
    auto* cmd_exp = app.add_subcommand("experiment", "Size / power / bandwidth-sweep experiment tables");
    std::string exp_kind, exp_out, exp_values, exp_sweep = "l";
    long long exp_trials = 2000, exp_n = 10000, exp_runs = 20, exp_total = 30000, exp_l = 10000;
    int exp_k = 4;
    double exp_quantile = kDefaultQ99, exp_tau = 0.5;
    std::uint64_t exp_seed = 1;
    cmd_exp->add_option("--kind", exp_kind, "size|power|bandwidth-sweep")
        ->required()
        ->check(CLI::IsMember({"size", "power", "bandwidth-sweep"}));
    cmd_exp->add_option("--trials", exp_trials, "trials per configuration");
    cmd_exp->add_option("--n", exp_n, "sequence length per trial");
    cmd_exp->add_option("--k", exp_k, "block length");
    cmd_exp->add_option("--quantile", exp_quantile, "|z| threshold");
    cmd_exp->add_option("--seed", exp_seed, "master seed");
    cmd_exp->add_option("--taus", exp_values, "comma list of tau values (power)");
    cmd_exp->add_option("--sweep", exp_sweep, "bandwidth-sweep parameter: l|tau")->check(CLI::IsMember({"l", "tau"}));
    cmd_exp->add_option("--values", exp_values, "comma list of sweep values");
    cmd_exp->add_option("--runs", exp_runs, "seeded runs per sweep value");
    cmd_exp->add_option("--total-length", exp_total, "stepwise total length");
    cmd_exp->add_option("--tau", exp_tau, "fixed tau for the l sweep");
    cmd_exp->add_option("--l", exp_l, "fixed l for the tau sweep");
    cmd_exp->add_option("--out", exp_out, "output CSV path")->required();

    // analyze
    auto* cmd_an = app.add_subcommand("analyze", "Train/test change-detection scan over a price CSV");
    std::string an_prices, an_train, an_test, an_out;
    int an_k = 4;
    double an_quantile = kDefaultQ99;
    long long an_w = 0, an_step = 1;
    cmd_an->add_option("--prices", an_prices, "price CSV (timestamp,price)")->required();
    cmd_an->add_option("--train", an_train, "training range t0:t1 (half-open)")->required();
    cmd_an->add_option("--test", an_test, "testing range t0:t1 (half-open)")->required();
    cmd_an->add_option("--k", an_k, "block length");
    cmd_an->add_option("--w", an_w, "explicit bandwidth (skips the search)");
    cmd_an->add_option("--quantile", an_quantile, "|z| threshold");
    cmd_an->add_option("--step", an_step, "scan step");
    cmd_an->add_option("--out", an_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_moments->parsed()) {
            return run_moments(mom_m, mom_k, mom_eval, mom_check);
        }

        if (cmd_variance->parsed()) {
            if (!var_probs.empty()) {
                if (var_n < 1) throw std::runtime_error("variance --probs requires --n");
                const auto probs = parse_probs(var_probs);
                const VarianceBreakdown vb = variance_true(probs, var_n);
                std::printf("term1 = %.12g\nterm2 = %.12g\nterm3 = %.12g\ntotal = %.12g\n", vb.term1, vb.term2,
                            vb.term3, vb.total);
            } else if (!var_seq.empty()) {
                if (var_alpha_raw > 0) var_alphabet = var_alpha_raw;
                const SymbolSequence seq = load_symbol_sequence(var_seq, var_alphabet);
                const BlockCounts counts = count_blocks(seq, var_k);
                print_estimate(estimate_entropy(counts), variance_plugin(counts));
            } else {
                throw std::runtime_error("variance needs --probs or --seq");
            }
            return 0;
        }

        if (cmd_cal->parsed()) {
            const VarianceMode mode = cal_variance == "plugin" ? VarianceMode::plugin : VarianceMode::analytic_uniform;
            const QuantileTable table = calibrate_quantiles(cal_n, cal_k, cal_alphabet, cal_sims, cal_seed, mode);
            if (table.calibration.below_min_length) {
                std::cerr << "warning: n below min_length(alphabet^k); analytic variance assumes all blocks appear\n";
            }
            save_quantile_table(table, cal_out);
            std::printf("q95 = %.6f\nq99 = %.6f\nwritten to %s\n", table.q95, table.q99, cal_out.c_str());
            return 0;
        }

        if (cmd_bw->parsed()) {
            std::optional<std::int64_t> alpha;
            if (bw_alphabet > 0) alpha = bw_alphabet;
            const SymbolSequence seq = load_symbol_sequence(bw_input, alpha);
            const std::int64_t w_max = bw_wmax > 0 ? bw_wmax : default_bandwidth_ceiling(seq, bw_k);
            const std::int64_t w_min = bw_wmin > 0 ? bw_wmin : std::min(default_bandwidth_floor(seq, bw_k), w_max - 1);
            const BandwidthResult result =
                bw_grid > 0 ? optimize_bandwidth_grid(seq, bw_k, bw_q99, w_min, w_max, bw_grid)
                            : optimize_bandwidth(seq, bw_k, bw_q99, w_min, w_max);
            std::ofstream out(bw_out);
            if (!out) throw std::runtime_error("cannot write " + bw_out);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", result.objective_value);
            out << "w_opt=" << result.w_opt << "\n"
                << "f_wopt=" << buf << "\n"
                << "stationary=" << (result.stationary_verdict ? 1 : 0) << "\n"
                << "w,f\n";
            for (const auto& [w, f] : result.evaluations) {
                std::snprintf(buf, sizeof buf, "%.12g", f);
                out << w << "," << buf << "\n";
            }
            std::printf("w_opt = %lld, f(w_opt) = %.6g, stationary = %s, probes = %zu\n",
                        static_cast<long long>(result.w_opt), result.objective_value,
                        result.stationary_verdict ? "yes" : "no", result.evaluations.size());
            return 0;
        }

        if (cmd_sim->parsed()) {
            SymbolSequence seq;
            if (sim_mode == "uniform") {
                seq = gen_uniform(sim_length, sim_alphabet, sim_seed);
            } else if (sim_mode == "tau") {
                seq = gen_tau_process(TauProcessSpec{sim_tau, sim_alphabet, sim_length, sim_seed});
            } else {
                seq = gen_stepwise(StepwiseSpec{sim_length, sim_l, sim_tau, sim_seed, sim_alphabet});
            }
            save_symbol_sequence(seq, sim_out);
            std::printf("wrote %lld symbols over alphabet %lld to %s\n", static_cast<long long>(seq.length()),
                        static_cast<long long>(seq.alphabet_size), sim_out.c_str());
            return 0;
        }

        if (cmd_exp->parsed()) {
            std::ofstream out(exp_out);
            if (!out) throw std::runtime_error("cannot write " + exp_out);
            if (exp_kind == "size") {
                const double rate = run_size_experiment(exp_trials, exp_n, exp_k, exp_quantile, exp_seed);
                out << "trials,n,k,quantile,rejection_rate_pct\n";
                out << exp_trials << "," << exp_n << "," << exp_k << "," << exp_quantile << "," << 100.0 * rate << "\n";
                std::printf("size: %.4g%% of %lld trials rejected\n", 100.0 * rate, static_cast<long long>(exp_trials));
            } else if (exp_kind == "power") {
                std::vector<double> taus;
                for (const auto& tok : split(exp_values.empty() ? "0.28,0.29,0.3,0.31" : exp_values, ','))
                    taus.push_back(std::stod(tok));
                out << "tau,h_tau,power_pct\n";
                for (double tau : taus) {
                    const double rate = run_power_experiment(tau, exp_trials, exp_n, exp_k, exp_quantile, exp_seed);
                    out << tau << "," << h_tau(tau) << "," << 100.0 * rate << "\n";
                    std::printf("tau = %.3g: power %.4g%%\n", tau, 100.0 * rate);
                }
            } else {  // bandwidth-sweep
                std::vector<double> values;
                for (const auto& tok : split(exp_values.empty() ? (exp_sweep == "l" ? "4000,10000" : "0.3,0.4,0.5")
                                                                : exp_values,
                                             ','))
                    values.push_back(std::stod(tok));
                out << exp_sweep << ",mean_wopt,std_wopt,runs\n";
                for (double v : values) {
                    std::vector<double> wopts;
                    for (long long run = 0; run < exp_runs; ++run) {
                        StepwiseSpec spec;
                        spec.total_length = exp_total;
                        spec.middle_length = exp_sweep == "l" ? static_cast<std::int64_t>(v) : exp_l;
                        spec.middle_tau = exp_sweep == "l" ? exp_tau : v;
                        spec.seed = exp_seed + static_cast<std::uint64_t>(run);
                        const SymbolSequence seq = gen_stepwise(spec);
                        const std::int64_t w_max = default_bandwidth_ceiling(seq, exp_k);
                        const std::int64_t w_min = default_bandwidth_floor(seq, exp_k);
                        const BandwidthResult r = optimize_bandwidth(seq, exp_k, exp_quantile, w_min, w_max);
                        wopts.push_back(static_cast<double>(r.w_opt));
                    }
                    const double m = mean(wopts);
                    const double sd = wopts.size() > 1 ? std::sqrt(sample_variance(wopts)) : 0.0;
                    out << v << "," << m << "," << sd << "," << exp_runs << "\n";
                    std::printf("%s = %g: mean w_opt = %.1f, std = %.1f\n", exp_sweep.c_str(), v, m, sd);
                }
            }
            std::printf("wrote %s\n", exp_out.c_str());
            return 0;
        }

        if (cmd_an->parsed()) {
            auto parse_range = [](const std::string& text) {
                const auto colon = text.find(':');
                if (colon == std::string::npos) throw std::runtime_error("range must be t0:t1, got " + text);
                return std::pair<std::int64_t, std::int64_t>{parse_timestamp(text.substr(0, colon)),
                                                             parse_timestamp(text.substr(colon + 1))};
            };
            AnalyzeOptions opts;
            std::tie(opts.train_begin, opts.train_end) = parse_range(an_train);
            std::tie(opts.test_begin, opts.test_end) = parse_range(an_test);
            opts.k = an_k;
            opts.quantile = an_quantile;
            opts.step = an_step;
            if (an_w > 0) opts.w = an_w;
            const ScanReport report = analyze(an_prices, opts);
            write_report(report, an_out);
            std::printf("w = %lld%s, tests = %lld, increases = %lld, decreases = %lld\n",
                        static_cast<long long>(report.params.w), report.params.w_was_optimized ? " (optimized)" : "",
                        static_cast<long long>(report.summary.n_tests),
                        static_cast<long long>(report.summary.n_increase),
                        static_cast<long long>(report.summary.n_decrease));
            std::printf("reports written under %s\n", an_out.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
