#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace basketcheck {

// Exact arithmetic for transition probabilities and the exact reachability
// solver. Arbitrary-precision components, so Gaussian elimination never
// overflows or rounds.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

double to_double(const Rational& r);

// Exact conversion of an integer or decimal literal ("7", "0.65") to a
// rational. Returns nullopt for anything else (signs, exponents, ...).
std::optional<Rational> rational_from_literal(std::string_view text);

// Shortest terminating decimal when the denominator divides a power of ten
// ("13/20" -> "0.65"), otherwise "num/den".
std::string rational_to_string(const Rational& r);

}  // namespace basketcheck
