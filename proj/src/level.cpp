#include "cmdp/level.hpp"

namespace cmdp {

std::string to_string(Level level) {
  return level.is_finite() ? std::to_string(level.value()) : "inf";
}

std::ostream& operator<<(std::ostream& os, Level level) { return os << to_string(level); }

}  // namespace cmdp
