#include "elicit/rational.hpp"

#include "elicit/error.hpp"

#include <cctype>

namespace elicit {

namespace {

bool is_integer_literal(std::string_view text) {
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) text.remove_prefix(1);
  if (text.empty()) return false;
  for (char ch : text) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view text, std::string_view whole) {
  if (!is_integer_literal(text)) {
    throw Error(ErrorCode::MalformedDocument,
                "not a rational: \"" + std::string(whole) + "\"");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return Integer(std::string(text), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));

  const Integer num = parse_integer(text.substr(0, slash), text);
  const Integer den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) {
    throw Error(ErrorCode::MalformedDocument,
                "zero denominator: \"" + std::string(text) + "\"");
  }
  Rational value(num, den);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

Rational power(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational factor = base;
  while (exponent != 0) {
    if (exponent & 1u) result *= factor;
    factor *= factor;
    exponent >>= 1u;
  }
  return result;
}

}  // namespace elicit
