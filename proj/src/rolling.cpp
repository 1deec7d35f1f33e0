#include "entroscan/rolling.hpp"

#include "entroscan/variance.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace entroscan {

namespace {
constexpr std::int64_t kDenseLimit = std::int64_t{1} << 22;
}

RollingWindow::RollingWindow(const SymbolSequence& seq, int k, std::int64_t start, std::int64_t width)
    : seq_(&seq), k_(k), start_(start), width_(width), n_eff_(width - k + 1) {
    if (k < 1 || width < k) throw std::invalid_argument("RollingWindow: need width >= k >= 1");
    if (start < 0 || start + width > seq.length()) throw std::invalid_argument("RollingWindow: window outside sequence");
    const std::int64_t a = seq.alphabet_size;
    const int bits = std::bit_width(static_cast<std::uint64_t>(std::max<std::int64_t>(a, 2) - 1));
    if (static_cast<std::int64_t>(k) * bits > 62) {
        throw std::invalid_argument("RollingWindow: k * ceil(log2 alphabet) exceeds 62 bits");
    }
    std::int64_t codes = 1;
    for (int i = 0; i < k; ++i) codes *= a;
    dense_ = codes <= kDenseLimit;
    if (dense_) dense_counts_.assign(static_cast<std::size_t>(codes), 0);

    for (std::int64_t i = 0; i < n_eff_; ++i) add_block(code_at(start_ + i));
}

std::uint64_t RollingWindow::code_at(std::int64_t pos) const {
    const auto a = static_cast<std::uint64_t>(seq_->alphabet_size);
    std::uint64_t code = 0;
    for (int i = 0; i < k_; ++i) {
        code = code * a + static_cast<std::uint64_t>(seq_->symbols[static_cast<std::size_t>(pos + i)]);
    }
    return code;
}

std::int64_t& RollingWindow::slot(std::uint64_t code) {
    return dense_ ? dense_counts_[static_cast<std::size_t>(code)] : sparse_counts_[code];
}

void RollingWindow::add_block(std::uint64_t code) {
    std::int64_t& f = slot(code);
    if (f > 0) {
        const long double lf = std::log(static_cast<double>(f));
        sums_.f_lnf -= f * lf;
        sums_.f_ln2f -= f * lf * lf;
        sums_.lnf -= lf;
        sums_.inv_f -= 1.0L / f;
        sums_.lnf_over_f -= lf / f;
    } else {
        ++sums_.m_hat;
    }
    ++f;
    const long double lf = std::log(static_cast<double>(f));
    sums_.f_lnf += f * lf;
    sums_.f_ln2f += f * lf * lf;
    sums_.lnf += lf;
    sums_.inv_f += 1.0L / f;
    sums_.lnf_over_f += lf / f;
}

void RollingWindow::remove_block(std::uint64_t code) {
    std::int64_t& f = slot(code);
    const long double lf = std::log(static_cast<double>(f));
    sums_.f_lnf -= f * lf;
    sums_.f_ln2f -= f * lf * lf;
    sums_.lnf -= lf;
    sums_.inv_f -= 1.0L / f;
    sums_.lnf_over_f -= lf / f;
    --f;
    if (f > 0) {
        const long double nf = std::log(static_cast<double>(f));
        sums_.f_lnf += f * nf;
        sums_.f_ln2f += f * nf * nf;
        sums_.lnf += nf;
        sums_.inv_f += 1.0L / f;
        sums_.lnf_over_f += nf / f;
    } else {
        --sums_.m_hat;
        if (!dense_) sparse_counts_.erase(code);
    }
}

void RollingWindow::advance() {
    if (start_ + width_ >= seq_->length()) throw std::out_of_range("RollingWindow: cannot advance past sequence end");
    remove_block(code_at(start_));
    add_block(code_at(start_ + n_eff_));
    ++start_;
}

EntropyEstimate RollingWindow::estimate() const {
    const PluginVariance var = variance_plugin_from_sums(sums_, n_eff_);
    EntropyEstimate est;
    est.value = entropy_from_sums(sums_, n_eff_);
    est.variance = var.value;
    est.k = k_;
    est.n_eff = n_eff_;
    est.m_hat = sums_.m_hat;
    est.variance_clamped = var.clamped;
    est.below_min_length = var.below_min_length;
    return est;
}

}  // namespace entroscan
