// Exact rational arithmetic used by the moment recursions and their oracles.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace entroscan {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// base^exp with exp >= 0
Rational pow_rational(const Rational& base, int exp);

// Parses a plain decimal literal ("0.25", "-3", "1e-3" is NOT accepted)
// into the exact rational it denotes.
Rational rational_from_decimal(const std::string& text);

}  // namespace entroscan
