#include "udpn/rational.hpp"

#include <cctype>

namespace udpn {

std::string to_string(const Rational &q) { return q.get_str(); }

static bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

std::optional<Rational> parse_rational(std::string_view text) {
  bool neg = false;
  if (!text.empty() && text.front() == '-') {
    neg = true;
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    return std::nullopt;
  Integer n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0)
    return std::nullopt;
  Rational q(n, d);
  q.canonicalize();
  if (neg)
    q = -q;
  return q;
}

Integer ceil(const Rational &q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

} // namespace udpn
