#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pwlsep {

/// Arbitrary-precision rational, always canonical (lowest terms, positive
/// denominator) after every arithmetic operation.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Raised for malformed user input (files, dimensions, labels).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation is called outside its documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Accepts "7", "-3/4", "1.25", "-0.5e-2". Throws InputError otherwise.
Rational parse_rational(std::string_view text);

/// Canonical text form: "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& value);

/// Exact conversion of a finite double.
Rational from_double(double value);

/// Best rational approximation with denominator at most `max_denominator`.
Rational approximate(double value, long max_denominator);

inline double to_double(const Rational& value) { return value.get_d(); }

inline int sign(const Rational& value) { return sgn(value); }

Rational dot(const RationalVector& a, const RationalVector& b);

/// Largest power-of-ten-free denominator check: true if `value` has a
/// terminating decimal expansion.
bool has_terminating_decimal(const Rational& value);

}  // namespace pwlsep
