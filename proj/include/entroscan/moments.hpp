// Central moments of the scaled binomial B(p,n)/n and of the bivariate
// marginal of the scaled multinomial, as exact polynomials in (p1, p2, 1/n).
// The recursions differentiate with respect to p1/p2, so moments are kept
// symbolic with rational coefficients rather than as numbers.
#pragma once

#include "entroscan/rational.hpp"

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace entroscan {

struct MomentOrder {
    int m = 0;
    int k = 0;  // k = 0 selects the binomial case
};

// Total moment order covered by the closed-form derivations; higher orders
// are computable but lie beyond the O(n^-4) series budget.
inline constexpr int kSeriesBudgetOrder = 6;

inline bool exceeds_series_budget(const MomentOrder& order) {
    return order.m + order.k > kSeriesBudgetOrder;
}

// p1^a * p2^b * (1/n)^c
struct Monomial {
    int p1 = 0;
    int p2 = 0;
    int inv_n = 0;
    auto operator<=>(const Monomial&) const = default;
};

class MomentPolynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    MomentPolynomial() = default;
    static MomentPolynomial constant(const Rational& c);
    static MomentPolynomial term(const Monomial& mono, const Rational& coeff);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Accumulates coeff onto mono; zero coefficients are never stored.
    void add_term(const Monomial& mono, const Rational& coeff);

    MomentPolynomial& operator+=(const MomentPolynomial& other);
    MomentPolynomial& operator-=(const MomentPolynomial& other);
    friend MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b);
    friend MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b);
    friend MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b);

    MomentPolynomial scaled(const Rational& factor) const;
    MomentPolynomial derivative_p1() const;
    MomentPolynomial derivative_p2() const;
    MomentPolynomial with_swapped_probs() const;  // p1 <-> p2

    // Drops every term with (1/n)-exponent above max_pow.
    MomentPolynomial truncated_inv_n(int max_pow) const;
    int max_inv_n_power() const;  // 0 for the zero polynomial

    Rational evaluate_exact(const Rational& p1, const Rational& p2, long long n) const;
    // Converts the (binary-exact) double inputs to rationals, evaluates
    // exactly, and only then rounds to double.
    double evaluate(double p1, double p2, long long n) const;

    std::string to_string() const;  // canonical sorted term order

    bool operator==(const MomentPolynomial&) const = default;

private:
    TermMap terms_;
};

// m-th central moment of B(p,n)/n via the Renovsky recursion; p lives in the
// p1 slot of the polynomial.
MomentPolynomial binomial_central_moment(const MomentOrder& order);
MomentPolynomial binomial_central_moment(int m);

// (m,k)-central moment of the scaled bivariate multinomial marginal.
MomentPolynomial multinomial_central_moment(const MomentOrder& order);
MomentPolynomial multinomial_central_moment(int m, int k);

// Full triangle mu[i][j] for i <= m_max, j <= k_max (one recursion pass).
std::vector<std::vector<MomentPolynomial>> multinomial_central_moments_upto(int m_max, int k_max);

// Exact central moment by full enumeration of the multinomial support.
// The moment is taken on the first category (exponent m) and, when k > 0,
// the second category (exponent k). Support enumeration caps at n <= 12.
Rational exact_moment_bruteforce(std::span<const Rational> probs, int n, const MomentOrder& order);

inline constexpr int kBruteforceMaxN = 12;

}  // namespace entroscan
