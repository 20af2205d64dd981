#include "cmdp/probability.hpp"

#include <charconv>
#include <limits>
#include <numeric>

namespace cmdp {
namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide a = num < 0 ? -num : num;
  Wide b = den;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ProbabilityFormatError("invalid probability '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("zero denominator");
  std::int64_t g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  if (denominator < 0) g = -g;
  num_ = numerator / g;
  den_ = denominator / g;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return Wide(a.num_) * b.den_ <=> Wide(b.num_) * a.den_;
}

Rational Rational::parse(std::string_view text) {
  std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw ProbabilityFormatError("empty probability");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = parse_integer(text.substr(0, slash), whole);
    std::int64_t d = parse_integer(text.substr(slash + 1), whole);
    if (d == 0) throw ProbabilityFormatError("zero denominator in '" + std::string(whole) + "'");
    return Rational(n, d);
  }

  std::int64_t exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    exponent = parse_integer(exp_text, whole);
    text = text.substr(0, e);
  }

  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Wide num = 0;
  Wide den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) throw ProbabilityFormatError("invalid probability '" + std::string(whole) + "'");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw ProbabilityFormatError("invalid probability '" + std::string(whole) + "'");
    seen_digit = true;
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (num > Wide(1) << 100 || den > Wide(1) << 100)
      throw ProbabilityFormatError("too many digits in '" + std::string(whole) + "'");
  }
  if (!seen_digit) throw ProbabilityFormatError("invalid probability '" + std::string(whole) + "'");
  if (exponent > 18 || exponent < -18)
    throw ProbabilityFormatError("exponent out of range in '" + std::string(whole) + "'");
  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  if (negative) num = -num;
  return make(num, den);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<std::string> Rational::to_decimal() const {
  std::int64_t d = den_;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::nullopt;
  int digits = std::max(twos, fives);
  if (digits > 18) return std::nullopt;
  // Scale to den = 10^digits.
  Wide scaled = Wide(num_);
  for (int i = twos; i < digits; ++i) scaled *= 2;
  for (int i = fives; i < digits; ++i) scaled *= 5;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  Wide pow10 = 1;
  for (int i = 0; i < digits; ++i) pow10 *= 10;
  std::string out = negative ? "-" : "";
  out += std::to_string(static_cast<std::int64_t>(scaled / pow10));
  if (digits > 0) {
    std::string frac = std::to_string(static_cast<std::int64_t>(scaled % pow10));
    out += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return out;
}

Probability operator+(const Probability& a, const Probability& b) {
  if (a.exact_ && b.exact_) return Probability(*a.exact_ + *b.exact_);
  return Probability(a.value_ + b.value_);
}

bool operator==(const Probability& a, const Probability& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.value_ == b.value_ && a.exact_.has_value() == b.exact_.has_value();
}

}  // namespace cmdp
