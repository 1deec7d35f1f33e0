#include "entroscan/moments.hpp"

#include <sstream>
#include <stdexcept>

namespace entroscan {

MomentPolynomial MomentPolynomial::constant(const Rational& c) {
    MomentPolynomial p;
    p.add_term(Monomial{}, c);
    return p;
}

MomentPolynomial MomentPolynomial::term(const Monomial& mono, const Rational& coeff) {
    MomentPolynomial p;
    p.add_term(mono, coeff);
    return p;
}

void MomentPolynomial::add_term(const Monomial& mono, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(mono, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& other) {
    for (const auto& [mono, coeff] : other.terms_) add_term(mono, coeff);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator-=(const MomentPolynomial& other) {
    for (const auto& [mono, coeff] : other.terms_) add_term(mono, -coeff);
    return *this;
}

MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b) {
    a += b;
    return a;
}

MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b) {
    a -= b;
    return a;
}

MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b) {
    MomentPolynomial out;
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            out.add_term(Monomial{ma.p1 + mb.p1, ma.p2 + mb.p2, ma.inv_n + mb.inv_n}, ca * cb);
        }
    }
    return out;
}

MomentPolynomial MomentPolynomial::scaled(const Rational& factor) const {
    MomentPolynomial out;
    if (factor == 0) return out;
    for (const auto& [mono, coeff] : terms_) out.add_term(mono, coeff * factor);
    return out;
}

MomentPolynomial MomentPolynomial::derivative_p1() const {
    MomentPolynomial out;
    for (const auto& [mono, coeff] : terms_) {
        if (mono.p1 == 0) continue;
        out.add_term(Monomial{mono.p1 - 1, mono.p2, mono.inv_n}, coeff * mono.p1);
    }
    return out;
}

MomentPolynomial MomentPolynomial::derivative_p2() const {
    MomentPolynomial out;
    for (const auto& [mono, coeff] : terms_) {
        if (mono.p2 == 0) continue;
        out.add_term(Monomial{mono.p1, mono.p2 - 1, mono.inv_n}, coeff * mono.p2);
    }
    return out;
}

MomentPolynomial MomentPolynomial::with_swapped_probs() const {
    MomentPolynomial out;
    for (const auto& [mono, coeff] : terms_) out.add_term(Monomial{mono.p2, mono.p1, mono.inv_n}, coeff);
    return out;
}

MomentPolynomial MomentPolynomial::truncated_inv_n(int max_pow) const {
    MomentPolynomial out;
    for (const auto& [mono, coeff] : terms_) {
        if (mono.inv_n <= max_pow) out.add_term(mono, coeff);
    }
    return out;
}

int MomentPolynomial::max_inv_n_power() const {
    int best = 0;
    for (const auto& [mono, coeff] : terms_) best = std::max(best, mono.inv_n);
    return best;
}

Rational MomentPolynomial::evaluate_exact(const Rational& p1, const Rational& p2, long long n) const {
    if (p1 <= 0 || p2 < 0 || p1 + p2 > 1 || n < 1) {
        throw std::invalid_argument("MomentPolynomial::evaluate: need 0 < p1, 0 <= p2, p1+p2 <= 1, n >= 1");
    }
    const Rational inv_n(1, n);
    Rational acc(0);
    for (const auto& [mono, coeff] : terms_) {
        acc += coeff * pow_rational(p1, mono.p1) * pow_rational(p2, mono.p2) * pow_rational(inv_n, mono.inv_n);
    }
    return acc;
}

double MomentPolynomial::evaluate(double p1, double p2, long long n) const {
    return to_double(evaluate_exact(Rational(p1), Rational(p2), n));
}

std::string MomentPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mono, coeff] : terms_) {
        Rational c = coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool has_var = mono.p1 > 0 || mono.p2 > 0 || mono.inv_n > 0;
        if (c != 1 || !has_var) {
            os << c;
            if (has_var) os << "*";
        }
        bool star = false;
        auto put = [&](const char* name, int e) {
            if (e == 0) return;
            if (star) os << "*";
            os << name;
            if (e != 1) os << "^" << e;
            star = true;
        };
        put("p1", mono.p1);
        put("p2", mono.p2);
        if (mono.inv_n > 0) {
            if (star) os << "*";
            os << "n^-" << mono.inv_n;
        }
    }
    return os.str();
}

namespace {

MomentPolynomial poly_one() { return MomentPolynomial::constant(Rational(1)); }

// (1 - p1) and friends
MomentPolynomial one_minus(int which) {
    MomentPolynomial p = poly_one();
    Monomial m;
    (which == 1 ? m.p1 : m.p2) = 1;
    p.add_term(m, Rational(-1));
    return p;
}

MomentPolynomial var_p(int which) {
    Monomial m;
    (which == 1 ? m.p1 : m.p2) = 1;
    return MomentPolynomial::term(m, Rational(1));
}

MomentPolynomial inv_n_poly() { return MomentPolynomial::term(Monomial{0, 0, 1}, Rational(1)); }

}  // namespace

MomentPolynomial binomial_central_moment(int m) {
    if (m < 0) throw std::invalid_argument("binomial_central_moment: m >= 0 required");
    // mu_{j+1} = p(1-p)/n * (j*mu_{j-1} + d/dp mu_j), mu_0 = 1, mu_1 = 0
    const MomentPolynomial pq_over_n = var_p(1) * one_minus(1) * inv_n_poly();
    std::vector<MomentPolynomial> mu(static_cast<std::size_t>(m) + 1);
    mu[0] = poly_one();
    for (int j = 0; j < m; ++j) {
        MomentPolynomial inner = mu[j].derivative_p1();
        if (j >= 1) inner += mu[j - 1].scaled(Rational(j));
        mu[j + 1] = pq_over_n * inner;
    }
    return mu[m];
}

MomentPolynomial binomial_central_moment(const MomentOrder& order) {
    if (order.k != 0) throw std::invalid_argument("binomial_central_moment: order.k must be 0");
    return binomial_central_moment(order.m);
}

std::vector<std::vector<MomentPolynomial>> multinomial_central_moments_upto(int m_max, int k_max) {
    if (m_max < 0 || k_max < 0) throw std::invalid_argument("multinomial moments: orders must be >= 0");
    std::vector<std::vector<MomentPolynomial>> mu(
        static_cast<std::size_t>(m_max) + 1,
        std::vector<MomentPolynomial>(static_cast<std::size_t>(k_max) + 1));
    mu[0][0] = poly_one();
    const MomentPolynomial inv_n = inv_n_poly();

    // mu_{m+1,k} = p1/n [ (1-p1) d/dp1 mu_{m,k} - p2 d/dp2 mu_{m,k}
    //                     + (1-p1) m mu_{m-1,k} - p2 k mu_{m,k-1} ]
    auto raise_first = [&](int m, int k) {
        MomentPolynomial inner = one_minus(1) * mu[m][k].derivative_p1() - var_p(2) * mu[m][k].derivative_p2();
        if (m >= 1) inner += (one_minus(1) * mu[m - 1][k]).scaled(Rational(m));
        if (k >= 1) inner -= (var_p(2) * mu[m][k - 1]).scaled(Rational(k));
        return var_p(1) * inv_n * inner;
    };
    // symmetric twin raising k
    auto raise_second = [&](int m, int k) {
        MomentPolynomial inner = one_minus(2) * mu[m][k].derivative_p2() - var_p(1) * mu[m][k].derivative_p1();
        if (k >= 1) inner += (one_minus(2) * mu[m][k - 1]).scaled(Rational(k));
        if (m >= 1) inner -= (var_p(1) * mu[m - 1][k]).scaled(Rational(m));
        return var_p(2) * inv_n * inner;
    };

    for (int i = 1; i <= m_max; ++i) mu[i][0] = raise_first(i - 1, 0);
    for (int j = 1; j <= k_max; ++j) {
        for (int i = 0; i <= m_max; ++i) mu[i][j] = raise_second(i, j - 1);
    }
    return mu;
}

MomentPolynomial multinomial_central_moment(int m, int k) {
    if (m < 0 || k < 0) throw std::invalid_argument("multinomial_central_moment: orders must be >= 0");
    auto table = multinomial_central_moments_upto(m, k);
    return table[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
}

MomentPolynomial multinomial_central_moment(const MomentOrder& order) {
    return multinomial_central_moment(order.m, order.k);
}

Rational exact_moment_bruteforce(std::span<const Rational> probs, int n, const MomentOrder& order) {
    if (order.m < 0 || order.k < 0) throw std::invalid_argument("bruteforce: orders must be >= 0");
    if (probs.empty()) throw std::invalid_argument("bruteforce: empty probability vector");
    if (order.k > 0 && probs.size() < 2) throw std::invalid_argument("bruteforce: k > 0 needs at least two categories");
    if (n < 1 || n > kBruteforceMaxN) throw std::invalid_argument("bruteforce: n outside [1, 12] enumeration cap");

    Rational sum(0);
    for (const auto& p : probs) {
        if (p <= 0) throw std::invalid_argument("bruteforce: probabilities must be positive");
        sum += p;
    }
    Rational err = sum - 1;
    if (err < 0) err = -err;
    if (err > Rational(1, 1000000000000LL)) throw std::invalid_argument("bruteforce: probabilities must sum to 1");
    // Restore exact normalization for inputs carrying double rounding.
    std::vector<Rational> p(probs.begin(), probs.end());
    if (sum != 1) {
        for (auto& v : p) v /= sum;
    }

    std::vector<Rational> factorial(static_cast<std::size_t>(n) + 1, Rational(1));
    for (int i = 1; i <= n; ++i) factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;

    const std::size_t c = p.size();
    std::vector<int> x(c, 0);
    Rational moment(0);
    const Rational inv_n(1, n);

    // Recursive enumeration of all count vectors summing to n.
    auto recurse = [&](auto&& self, std::size_t idx, int remaining) -> void {
        if (idx + 1 == c) {
            x[idx] = remaining;
            Rational pmf = factorial[static_cast<std::size_t>(n)];
            for (std::size_t j = 0; j < c; ++j) {
                pmf /= factorial[static_cast<std::size_t>(x[j])];
                pmf *= pow_rational(p[j], x[j]);
            }
            Rational d1 = Rational(x[0]) * inv_n - p[0];
            Rational term = pow_rational(d1, order.m);
            if (order.k > 0) {
                Rational d2 = Rational(x[1]) * inv_n - p[1];
                term *= pow_rational(d2, order.k);
            }
            moment += term * pmf;
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            x[idx] = v;
            self(self, idx + 1, remaining - v);
        }
    };
    recurse(recurse, 0, n);
    return moment;
}

}  // namespace entroscan
