#include "brd/rational.hpp"

#include "brd/errors.hpp"

#include <cctype>

namespace brd {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InvalidInput("malformed rational: \"" + std::string(whole) + "\"");
  Integer v{std::string(s)};
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    Integer p = parse_integer(text.substr(0, slash), text);
    std::string_view qs = text.substr(slash + 1);
    if (!all_digits(qs)) throw InvalidInput("malformed rational: \"" + std::string(text) + "\"");
    Integer q(std::string{qs});
    if (q == 0) throw InvalidInput("zero denominator: \"" + std::string(text) + "\"");
    return Rational(p, q);
  }
  auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    if (!all_digits(fp)) throw InvalidInput("malformed rational: \"" + std::string(text) + "\"");
    bool negative = !ip.empty() && ip[0] == '-';
    std::string_view mag = ip;
    if (!mag.empty() && (mag[0] == '-' || mag[0] == '+')) mag.remove_prefix(1);
    Integer whole = mag.empty() ? Integer(0) : parse_integer(mag, text);
    Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(fp.size()));
    Rational r(whole * scale + Integer(std::string(fp)), scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

Integer floor(const Rational& value) {
  Integer n = boost::multiprecision::numerator(value);
  Integer d = boost::multiprecision::denominator(value);
  Integer q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Integer ceil(const Rational& value) {
  Integer f = floor(value);
  return Rational(f) == value ? f : Integer(f + 1);
}

Integer isqrt_floor(const Rational& value) {
  Integer f = floor(value);
  Integer r = boost::multiprecision::sqrt(f);
  return r;
}

bool integer_cube_root(const Rational& value, Integer& root) {
  if (boost::multiprecision::denominator(value) != 1 || value < 0) return false;
  Integer n = boost::multiprecision::numerator(value);
  Integer lo = 0, hi = 1;
  while (hi * hi * hi < n) hi *= 2;
  while (lo < hi) {
    Integer mid = (lo + hi) / 2;
    if (mid * mid * mid < n) lo = mid + 1; else hi = mid;
  }
  if (lo * lo * lo != n) return false;
  root = lo;
  return true;
}

}  // namespace brd
