#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace udpn {

/// Exact rational number. Arithmetic results are in lowest terms; build
/// fractions with `fraction`, since mpq_class(n, d) is left unreduced.
using Rational = mpq_class;
using Integer = mpz_class;

std::string to_string(const Rational &q);

/// Parses "p" or "p/q" (optional leading '-'). Rejects a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

Integer ceil(const Rational &q);

inline Rational fraction(const Integer &n, const Integer &d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational &q) { return sgn(q) == 0; }

} // namespace udpn
