#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace conewave {

/// Arbitrary-precision rational. Every exponent inequality in the ledger is
/// evaluated with this type; floating point never enters a verdict.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a finite decimal ("0.76" -> 19/25) exactly.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// "num/den" in lowest terms; integers are written "num/1".
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace conewave
