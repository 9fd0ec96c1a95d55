#include "orbitforge/rational.hpp"

#include <cctype>

#include "orbitforge/errors.hpp"

namespace orbitforge {

std::string to_fraction_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

bool signed_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return all_digits(s);
}

}  // namespace

bool looks_like_fraction(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return false;
  return signed_integer(text.substr(0, slash)) && all_digits(text.substr(slash + 1));
}

Rational parse_fraction(std::string_view text) {
  using boost::multiprecision::cpp_int;
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!signed_integer(num) || !all_digits(den)) throw ParseError("not a fraction: '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n.front() == '+') n.erase(0, 1);
  const cpp_int d(std::string{den});
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(cpp_int(n), d);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace orbitforge
