#include "conewave/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace conewave {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational parse_decimal(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw std::invalid_argument("empty number");
  if (!whole.empty() && !all_digits(whole)) throw std::invalid_argument("bad integer part");
  if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) {
    throw std::invalid_argument("bad fractional part");
  }
  cpp_int num = whole.empty() ? cpp_int(0) : cpp_int(std::string(whole));
  cpp_int den = 1;
  for (char c : frac) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  Rational out(num, den);
  return negative ? Rational(-out) : out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty rational");
  try {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    Rational num = parse_decimal(trim(text.substr(0, slash)));
    Rational den = parse_decimal(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return num / den;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  }
}

std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace conewave
