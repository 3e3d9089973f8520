#ifndef PCSP_NUMBERS_HPP
#define PCSP_NUMBERS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace pcsp {

// Coefficients are exact integers, exponents exact rationals. Both are
// arbitrary precision: repeated squaring during reductions can overflow any
// fixed-width type long before the instances stop being interesting.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool rat_is_integer(const Rat& q) { return rat_den(q) == 1; }

// "3", "-7/2" -- the exponent syntax used by the polynomial grammar.
Rat parse_rational(const std::string& text);

// Accepts "2", "-0.25", "5/2"; decimals are converted exactly.
Rat parse_decimal_or_rational(const std::string& text);

// Canonical form: denominator omitted when 1, e.g. "3", "-7/2".
std::string rational_to_string(const Rat& q);

double to_double(const Rat& q);
double to_double(const Int& n);

}  // namespace pcsp

#endif
