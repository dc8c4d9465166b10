#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace elicit {

/// Exact rational number. GMP keeps every value canonical: lowest terms,
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "num/den" or a bare integer. Throws Error(MalformedDocument) on
/// anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Always "num/den", even for integers ("3/1", "0/1").
std::string to_string(const Rational& value);

/// Lossy; for human-facing output only.
double to_double(const Rational& value);

/// base^exponent for a nonnegative exponent.
Rational power(const Rational& base, unsigned exponent);

}  // namespace elicit
