#include "entroscan/variance.hpp"

#include "entroscan/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace entroscan {

VarianceBreakdown variance_true(std::span<const double> probs, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("variance_true: n >= 1 required");
    const double h = entropy_true(probs);  // validates probs
    const auto m = static_cast<double>(probs.size());

    // sum p ln^2 p - H^2 as a weighted variance of -ln p; exact cancellation
    // in the equal-probability case instead of catastrophic subtraction.
    long double t1 = 0, inv = 0, lp_over_p = 0;
    for (double p : probs) {
        const long double d = std::log(p) + h;
        t1 += p * d * d;
        inv += 1.0L / p;
        lp_over_p += std::log(p) / static_cast<long double>(p);
    }

    VarianceBreakdown out;
    out.term1 = static_cast<double>(t1);
    out.term2 = 0.5 * m - 0.5;
    out.term3 = static_cast<double>(((1.0L - h) * inv - lp_over_p - 1.0L) / 6.0L);
    const auto nd = static_cast<double>(n);
    out.total = out.term1 / nd + out.term2 / (nd * nd) + out.term3 / (nd * nd * nd);
    return out;
}

double variance_max(std::int64_t m, std::int64_t n, int k) {
    if (m < 1) throw std::invalid_argument("variance_max: M >= 1 required");
    const std::int64_t n_eff = n - k + 1;
    if (n_eff < 1) throw std::invalid_argument("variance_max: n - k + 1 >= 1 required");
    const auto ne = static_cast<double>(n_eff);
    const auto md = static_cast<double>(m);
    return (md - 1) / (2 * ne * ne) + (md * md - 1) / (6 * ne * ne * ne);
}

PluginVariance variance_plugin_from_sums(const WindowSums& sums, std::int64_t n_eff) {
    if (n_eff < 1) throw std::invalid_argument("variance_plugin: n_eff >= 1 required");
    const auto n = static_cast<long double>(n_eff);
    const long double ln_n = std::log(static_cast<double>(n_eff));
    const auto m = static_cast<long double>(sums.m_hat);

    const long double h = entropy_from_sums(sums, n_eff);
    // A = sum p ln^2 p, B = sum ln p, C = sum 1/p, D = sum ln(p)/p, p = f/n
    const long double a = (sums.f_ln2f - 2 * ln_n * sums.f_lnf) / n + ln_n * ln_n;
    const long double b = sums.lnf - m * ln_n;
    const long double c = n * sums.inv_f;
    const long double d = n * (sums.lnf_over_f - ln_n * sums.inv_f);

    const long double first = a - h * h;
    const long double second = first - m * h - b - m / 2 + 0.5L;
    const long double third =
        first - m * h - b - h * c / 3 - d / 3 - c / 12 - m * m / 4 - m / 2 + 5.0L / 6;
    const long double raw = first / n + second / (n * n) + third / (n * n * n);

    PluginVariance out;
    out.raw = static_cast<double>(raw);
    out.clamped = out.raw < 0;
    out.value = out.clamped ? 0.0 : out.raw;
    out.below_min_length = sums.m_hat >= 2 && n_eff < min_length(sums.m_hat);
    return out;
}

PluginVariance variance_plugin(const BlockCounts& counts) {
    if (counts.counts.empty()) throw std::invalid_argument("variance_plugin: empty counts");
    return variance_plugin_from_sums(accumulate_sums(counts), counts.n_eff);
}

EntropyEstimate estimate_entropy(const BlockCounts& counts) {
    const WindowSums sums = accumulate_sums(counts);
    const PluginVariance var = variance_plugin_from_sums(sums, counts.n_eff);
    EntropyEstimate est;
    est.value = entropy_from_sums(sums, counts.n_eff);
    est.variance = var.value;
    est.k = counts.k;
    est.n_eff = counts.n_eff;
    est.m_hat = counts.m_hat;
    est.variance_clamped = var.clamped;
    est.below_min_length = var.below_min_length;
    return est;
}

double harmonic_number(int m) {
    if (m < 0) throw std::invalid_argument("harmonic_number: m >= 0 required");
    long double s = 0;
    for (int j = 1; j <= m; ++j) s += 1.0L / j;
    return static_cast<double>(s);
}

namespace {

constexpr int kInvNBudget = 3;  // series keep moment terms up to 1/n^3

void check_series_args(double p, std::int64_t n, int max_order) {
    if (!(p > 0) || p > 1) throw std::invalid_argument("series expectation: p must be in (0, 1]");
    if (n < 1) throw std::invalid_argument("series expectation: n >= 1 required");
    if (max_order < 0 || max_order > kSeriesBudgetOrder) {
        throw std::invalid_argument("series expectation: max_order must be in [0, 6]");
    }
}

}  // namespace

double series_expectation_plogp(double p, std::int64_t n, int max_order) {
    check_series_args(p, n, max_order);
    double acc = p * std::log(p);
    for (int m = 2; m <= max_order; ++m) {
        const double mu = binomial_central_moment(m).truncated_inv_n(kInvNBudget).evaluate(p, 0.0, n);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        acc += sign * mu / (static_cast<double>(m) * (m - 1) * std::pow(p, m - 1));
    }
    return acc;
}

double series_expectation_p2log2p(double p, std::int64_t n, int max_order) {
    check_series_args(p, n, max_order);
    const double lp = std::log(p);
    double acc = p * p * lp * lp;
    if (max_order < 2) return acc;
    const double mu2 = binomial_central_moment(2).evaluate(p, 0.0, n);
    acc += (lp * lp + 3 * lp + 1) * mu2;
    for (int m = 1; m + 2 <= max_order; ++m) {
        const double mu = binomial_central_moment(m + 2).truncated_inv_n(kInvNBudget).evaluate(p, 0.0, n);
        const double sign = (m % 2 == 1) ? 1.0 : -1.0;  // (-1)^(m+1)
        acc += 4 * sign * (lp - harmonic_number(m - 1) + 1.5) * mu /
               (static_cast<double>(m) * (m + 1) * (m + 2) * std::pow(p, m));
    }
    return acc;
}

double series_expectation_cross(double p1, double p2, std::int64_t n, int max_order) {
    check_series_args(p1, n, max_order);
    if (!(p2 > 0) || p1 + p2 > 1 + 1e-12) {
        throw std::invalid_argument("series_expectation_cross: need p1, p2 > 0 and p1 + p2 <= 1");
    }
    const double l1 = std::log(p1);
    const double l2 = std::log(p2);
    double acc = p1 * p2 * l1 * l2;
    if (max_order < 2) return acc;

    const auto table = multinomial_central_moments_upto(max_order, max_order);
    auto mu = [&](int m, int k) {
        return table[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)]
            .truncated_inv_n(kInvNBudget)
            .evaluate(p1, p2, n);
    };

    acc += (l1 + 1) * (l2 + 1) * mu(1, 1);
    for (int m = 2; m <= max_order; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double coeff = sign / (static_cast<double>(m) * (m - 1));
        acc += coeff * (p1 * l1 * mu(0, m) / std::pow(p2, m - 1) + p2 * l2 * mu(m, 0) / std::pow(p1, m - 1));
        if (1 + m <= max_order) {
            acc += coeff * ((l1 + 1) * mu(1, m) / std::pow(p2, m - 1) + (l2 + 1) * mu(m, 1) / std::pow(p1, m - 1));
        }
    }
    for (int m = 2; m <= max_order; ++m) {
        for (int k = 2; m + k <= max_order; ++k) {
            const double sign = ((m + k) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * mu(m, k) /
                   (static_cast<double>(m) * (m - 1) * k * (k - 1) * std::pow(p1, m - 1) * std::pow(p2, k - 1));
        }
    }
    return acc;
}

}  // namespace entroscan
