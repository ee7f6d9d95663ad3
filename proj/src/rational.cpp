#include "pwlsep/rational.hpp"

#include <cctype>
#include <cmath>

namespace pwlsep {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string digits(s);
  if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
  return mpz_class(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den)) {
      throw InputError("malformed rational literal '" + std::string(text) + "'");
    }
    mpz_class d = parse_integer(den);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational r(parse_integer(num), d);
    r.canonicalize();
    return r;
  }
  if (is_integer_text(text)) return Rational(parse_integer(text));

  // Decimal with optional exponent, converted exactly.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = text.substr(e + 1);
    if (!is_integer_text(exp_text)) throw InputError("malformed exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_text));
    mantissa = text.substr(0, e);
  }
  auto dot_pos = mantissa.find('.');
  if (dot_pos == std::string_view::npos) {
    if (!is_integer_text(mantissa)) throw InputError("malformed number '" + std::string(text) + "'");
  }
  std::string digits;
  bool negative = false;
  std::size_t i = 0;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    i = 1;
  }
  long frac_digits = 0;
  bool seen_dot = false;
  for (; i < mantissa.size(); ++i) {
    char c = mantissa[i];
    if (c == '.') {
      if (seen_dot) throw InputError("malformed number '" + std::string(text) + "'");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw InputError("malformed number '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw InputError("malformed number '" + std::string(text) + "'");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite number");
  return Rational(value);
}

Rational approximate(double value, long max_denominator) {
  if (!std::isfinite(value)) throw InputError("non-finite number");
  // Convergents of the continued fraction, stopped at the denominator cap.
  long double x = value;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    long double a = std::floor(x);
    if (std::fabs(a) > 9e15L) break;
    mpz_class ai(static_cast<double>(a));
    mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    long double frac = x - a;
    if (frac < 1e-18L) break;
    x = 1 / frac;
  }
  if (q1 == 0) return from_double(value);
  return Rational(p1, q1);
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
  return s;
}

bool has_terminating_decimal(const Rational& value) {
  mpz_class d = value.get_den();
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) d /= 2;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) d /= 5;
  return d == 1;
}

}  // namespace pwlsep
