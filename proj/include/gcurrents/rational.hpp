#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "gcurrents/errors.hpp"

namespace gcurrents {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

inline BigInt floor(const Rational& q) {
  const BigInt& num = boost::multiprecision::numerator(q);
  const BigInt& den = boost::multiprecision::denominator(q);
  BigInt quot = num / den;  // truncates toward zero
  if (num < 0 && quot * den != num) quot -= 1;
  return quot;
}

inline Rational frac(const Rational& q) { return q - Rational(floor(q)); }

/// "p/q" when the denominator is not 1, plain "p" otherwise.
inline std::string to_string(const Rational& q) {
  const BigInt& den = boost::multiprecision::denominator(q);
  if (den == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

/// Accepts "p", "p/q" and finite decimals such as "-2.75".
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw InputError("not a rational number: '" + std::string(text) + "'");
  };
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) fail();
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) fail();
    for (std::size_t i = start; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) fail();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac_digits = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole == "-" || whole == "+" || whole.empty()) whole = "0";
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac_digits.size(); ++i) scale *= 10;
    BigInt w = parse_int(whole);
    BigInt f = frac_digits.empty() ? BigInt(0) : parse_int(frac_digits);
    if (frac_digits.size() && (frac_digits[0] == '-' || frac_digits[0] == '+')) fail();
    BigInt magnitude = (w < 0 ? BigInt(-w) : w) * scale + f;
    return Rational(negative ? BigInt(-magnitude) : magnitude, scale);
  }
  return Rational(parse_int(text));
}

}  // namespace gcurrents
