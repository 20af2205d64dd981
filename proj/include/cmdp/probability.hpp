#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cmdp {

class ProbabilityFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact non-negative-denominator fraction in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// Parses "3/8", "0.125", "1e-3" or "2". Throws ProbabilityFormatError.
  static Rational parse(std::string_view text);

  /// "n/d", or "n" when d == 1.
  std::string to_string() const;

  /// Decimal text if the denominator only has factors 2 and 5.
  std::optional<std::string> to_decimal() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Transition probability. Keeps the exact fraction when one is known and a
/// double for sampling.
class Probability {
 public:
  Probability() = default;
  explicit Probability(double value) : value_(value) {}
  Probability(Rational exact) : value_(exact.to_double()), exact_(exact) {}

  double value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }

  friend Probability operator+(const Probability& a, const Probability& b);
  friend bool operator==(const Probability& a, const Probability& b);

 private:
  double value_ = 0.0;
  std::optional<Rational> exact_;
};

}  // namespace cmdp
