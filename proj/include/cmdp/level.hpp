#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace cmdp {

/// Integral resource amounts (consumption, loads, capacity).
using Amount = std::int64_t;

/// A value in N ∪ {∞}. Finite values are exact and may exceed the capacity;
/// callers truncate explicitly where the algorithms call for it.
class Level {
 public:
  constexpr Level() = default;
  constexpr explicit Level(Amount n) : value_(n) {}

  static constexpr Level infinity() {
    Level l;
    l.value_ = kInf;
    return l;
  }

  constexpr bool is_finite() const { return value_ != kInf; }
  constexpr bool is_infinite() const { return value_ == kInf; }

  /// Only meaningful for finite levels.
  constexpr Amount value() const { return value_; }

  friend constexpr auto operator<=>(Level, Level) = default;
  friend constexpr bool operator==(Level, Level) = default;

  friend constexpr Level operator+(Level a, Level b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    if (b.value_ > 0 && a.value_ >= kInf - b.value_) return infinity();
    return Level(a.value_ + b.value_);
  }
  friend constexpr Level operator+(Level a, Amount b) { return a + Level(b); }
  friend constexpr Level operator+(Amount a, Level b) { return Level(a) + b; }

 private:
  static constexpr Amount kInf = std::numeric_limits<Amount>::max();
  Amount value_ = 0;
};

inline constexpr Level kInfinity = Level::infinity();

/// Per-state vector of levels, indexed by StateId.
using LevelVector = std::vector<Level>;

/// Maps values above `capacity` to infinity.
constexpr Level cap_truncate(Level v, Amount capacity) {
  return (v.is_finite() && v.value() <= capacity) ? v : kInfinity;
}

/// "inf" for infinity, decimal otherwise.
std::string to_string(Level level);
std::ostream& operator<<(std::ostream& os, Level level);

}  // namespace cmdp
