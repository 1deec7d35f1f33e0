#include "entroscan/moments.hpp"

#include <doctest.h>

#include <vector>

using namespace entroscan;

namespace {

MomentPolynomial make_poly(std::initializer_list<std::pair<Monomial, Rational>> terms) {
    MomentPolynomial p;
    for (const auto& [mono, coeff] : terms) p.add_term(mono, coeff);
    return p;
}

}  // namespace

TEST_CASE("binomial base cases") {
    CHECK(binomial_central_moment(0) == MomentPolynomial::constant(Rational(1)));
    CHECK(binomial_central_moment(1).is_zero());
    CHECK(binomial_central_moment(MomentOrder{1, 0}).is_zero());
    CHECK_THROWS(binomial_central_moment(MomentOrder{2, 1}));
}

TEST_CASE("binomial mu2 is p(1-p)/n") {
    const auto expected = make_poly({{{1, 0, 1}, 1}, {{2, 0, 1}, -1}});
    CHECK(binomial_central_moment(2) == expected);
}

TEST_CASE("binomial mu3 and mu4 match the closed forms") {
    // mu3 = p(1-p)(1-2p)/n^2 = (p - 3p^2 + 2p^3)/n^2
    const auto mu3 = make_poly({{{1, 0, 2}, 1}, {{2, 0, 2}, -3}, {{3, 0, 2}, 2}});
    CHECK(binomial_central_moment(3) == mu3);

    // mu4 = 3p^2(1-p)^2/n^2 + (p(1-p) - 6p^2(1-p)^2)/n^3, with no higher 1/n terms
    const auto mu4 = make_poly({{{2, 0, 2}, 3},
                                {{3, 0, 2}, -6},
                                {{4, 0, 2}, 3},
                                {{1, 0, 3}, 1},
                                {{2, 0, 3}, -7},
                                {{3, 0, 3}, 12},
                                {{4, 0, 3}, -6}});
    CHECK(binomial_central_moment(4) == mu4);
}

TEST_CASE("multinomial base cases") {
    CHECK(multinomial_central_moment(1, 0).is_zero());
    CHECK(multinomial_central_moment(0, 1).is_zero());
    // mu_{1,1} = -p1 p2 / n
    CHECK(multinomial_central_moment(1, 1) == make_poly({{{1, 1, 1}, -1}}));
}

TEST_CASE("mu_{2,1} matches the closed form") {
    // -p1 p2 (1 - 2 p1)/n^2
    const auto expected = make_poly({{{1, 1, 2}, -1}, {{2, 1, 2}, 2}});
    CHECK(multinomial_central_moment(2, 1) == expected);
}

TEST_CASE("marginal of the second category reduces to the binomial moment") {
    // mu_{0,2} = p2(1-p2)/n
    const auto expected = make_poly({{{0, 1, 1}, 1}, {{0, 2, 1}, -1}});
    CHECK(multinomial_central_moment(0, 2) == expected);
}

TEST_CASE("reduction: mu_{m,0} equals the binomial recursion") {
    for (int m = 0; m <= 6; ++m) {
        CHECK(multinomial_central_moment(m, 0) == binomial_central_moment(m));
    }
}

TEST_CASE("symmetry: mu_{m,k}(p1,p2) == mu_{k,m}(p2,p1) as polynomials") {
    for (int m = 0; m <= 4; ++m) {
        for (int k = 0; m + k <= 6 && k <= 4; ++k) {
            CHECK(multinomial_central_moment(m, k) == multinomial_central_moment(k, m).with_swapped_probs());
        }
    }
}

TEST_CASE("odd central moments vanish at p = 1/2") {
    const Rational half(1, 2);
    CHECK(binomial_central_moment(3).evaluate_exact(half, 0, 7) == 0);
    CHECK(binomial_central_moment(5).evaluate_exact(half, 0, 7) == 0);
}

TEST_CASE("evaluate fixtures") {
    CHECK(binomial_central_moment(2).evaluate(0.25, 0.0, 100) == doctest::Approx(0.001875).epsilon(1e-14));
    CHECK(multinomial_central_moment(1, 1).evaluate(0.25, 0.25, 1000) == doctest::Approx(-6.25e-5).epsilon(1e-14));
    // mu6 leading term 15 p^3 (1-p)^3 / n^3 at p = 1/2, n = 10
    const double lead = binomial_central_moment(6).truncated_inv_n(3).evaluate(0.5, 0.0, 10);
    CHECK(lead == doctest::Approx(2.34375e-4).epsilon(1e-14));
    CHECK(binomial_central_moment(6).max_inv_n_power() > 3);  // exact polynomial carries the O(n^-4) tail
}

TEST_CASE("evaluate rejects domain violations") {
    const auto mu2 = binomial_central_moment(2);
    CHECK_THROWS(mu2.evaluate(0.0, 0.0, 10));
    CHECK_THROWS(mu2.evaluate(0.6, 0.5, 10));
    CHECK_THROWS(mu2.evaluate(0.5, 0.0, 0));
}

TEST_CASE("series budget flag") {
    CHECK_FALSE(exceeds_series_budget(MomentOrder{3, 3}));
    CHECK(exceeds_series_budget(MomentOrder{4, 3}));
    // orders above the budget still compute
    CHECK_FALSE(multinomial_central_moment(4, 3).is_zero());
}

TEST_CASE("bruteforce fixtures") {
    const std::vector<Rational> half_half{Rational(1, 2), Rational(1, 2)};
    CHECK(exact_moment_bruteforce(half_half, 4, {2, 0}) == Rational(1, 16));

    // binomial mu3 at p = 3/10, n = 5: p(1-p)(1-2p)/n^2 = 21/6250 = 0.003360
    const std::vector<Rational> p37{Rational(3, 10), Rational(7, 10)};
    const Rational mu3 = exact_moment_bruteforce(p37, 5, {3, 0});
    CHECK(mu3 == Rational(21, 6250));
    CHECK(mu3 == binomial_central_moment(3).evaluate_exact(Rational(3, 10), 0, 5));

    // trivariate (2,2)-moment against the recursion, full 28-point support
    const std::vector<Rational> p235{Rational(1, 5), Rational(3, 10), Rational(1, 2)};
    const Rational brute = exact_moment_bruteforce(p235, 6, {2, 2});
    const Rational recursion = multinomial_central_moment(2, 2).evaluate_exact(Rational(1, 5), Rational(3, 10), 6);
    CHECK(brute == recursion);
}

TEST_CASE("bruteforce rejects bad input") {
    const std::vector<Rational> probs{Rational(1, 2), Rational(1, 2)};
    CHECK_THROWS(exact_moment_bruteforce(probs, 13, {2, 0}));  // enumeration cap
    const std::vector<Rational> bad{Rational(1, 2), Rational(1, 3)};
    CHECK_THROWS(exact_moment_bruteforce(bad, 4, {2, 0}));
    const std::vector<Rational> zero{Rational(0), Rational(1)};
    CHECK_THROWS(exact_moment_bruteforce(zero, 4, {2, 0}));
}

TEST_CASE("degenerate two-category marginal: mu_{3,2} at p2 = 1-p1 equals mu_5") {
    // (dp2 = -dp1, so the even power collapses onto the binomial moment)
    const Rational p(3, 10), q(7, 10);
    for (int n = 2; n <= 8; ++n) {
        const Rational lhs = multinomial_central_moment(3, 2).evaluate_exact(p, q, n);
        const Rational rhs = binomial_central_moment(5).evaluate_exact(p, 0, n);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("canonical printing") {
    CHECK(binomial_central_moment(1).to_string() == "0");
    CHECK(binomial_central_moment(2).to_string() == "p1*n^-1 - p1^2*n^-1");
    CHECK(multinomial_central_moment(1, 1).to_string() == "-p1*p2*n^-1");
}
