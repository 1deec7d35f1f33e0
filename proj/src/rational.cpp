#include "entroscan/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace entroscan {

Rational pow_rational(const Rational& base, int exp) {
    if (exp < 0) throw std::invalid_argument("pow_rational: negative exponent");
    Rational result(1);
    Rational b = base;
    unsigned e = static_cast<unsigned>(exp);
    while (e > 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

Rational rational_from_decimal(const std::string& text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    int frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad decimal: " + text);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            if (seen_dot) ++frac_digits;
            seen_digit = true;
        } else {
            throw std::invalid_argument("bad decimal: " + text);
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad decimal: " + text);
    BigInt den = 1;
    for (int d = 0; d < frac_digits; ++d) den *= 10;
    Rational value(digits, den);
    return negative ? -value : value;
}

}  // namespace entroscan
