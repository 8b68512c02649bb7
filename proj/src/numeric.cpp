#include "robustflow/numeric.hpp"

#include <cctype>
#include <charconv>
#include <iomanip>
#include <sstream>

namespace robustflow {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view token) {
  throw std::invalid_argument("malformed number '" + std::string(token) + "'");
}

}  // namespace

Rational parse_rational(std::string_view token) {
  std::string_view body = token;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(token);
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
    value = Rational(n, d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      bad_number(token);
    }
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class n(digits, 10);
    mpz_class d;
    mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
    value = Rational(n, d);
    value.canonicalize();
  } else {
    if (!all_digits(body)) bad_number(token);
    value = Rational(mpz_class(std::string(body), 10));
  }
  return negative ? Rational(-value) : value;
}

Extended<Rational> parse_extended(std::string_view token) {
  if (token == "inf" || token == "+inf") return Extended<Rational>::infinity();
  return Extended<Rational>(parse_rational(token));
}

std::string format_rational(const Rational& x) { return x.get_str(); }

std::string format_extended(const Extended<Rational>& x) {
  return x.is_infinite() ? std::string("inf") : format_rational(x.value());
}

std::string format_scalar(const Rational& x) { return format_rational(x); }

std::string format_scalar(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
  }
  return std::string(buf, end);
}

}  // namespace robustflow
