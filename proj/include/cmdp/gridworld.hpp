#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdp/model.hpp"
#include "cmdp/probability.hpp"

namespace cmdp::grid {

class GenerationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Counter-clockwise from east, so neighbours in this order are 45° apart.
enum class Direction { E, NE, N, NW, W, SW, S, SE };

inline constexpr std::array<Direction, 8> kAllDirections = {Direction::E,  Direction::NE, Direction::N,
                                                            Direction::NW, Direction::W,  Direction::SW,
                                                            Direction::S,  Direction::SE};

std::string to_string(Direction d);

/// Row 0 is the northern edge, column 0 the western one.
struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct GridSpec {
  int size = 0;
  std::vector<Cell> reloads;
  std::vector<Cell> targets;
  Amount capacity = 0;
  Amount weak_cost = 1;
  Amount strong_cost = 2;
  /// Probability that a weak move lands where intended; the rest splits evenly
  /// between the two neighbouring directions.
  Rational weak_success{4, 5};
  std::vector<Direction> directions{kAllDirections.begin(), kAllDirections.end()};
};

struct GridWorld {
  Cmdp model;
  StateSet targets;
};

/// "r<row>c<col>".
std::string cell_name(Cell cell);
StateId cell_state(int size, Cell cell);

/// One state per cell. Weak actions ("weak_<dir>") come before strong ones
/// ("strong_<dir>"), each in the order of `directions`. A weak action exists
/// only when its intended cell and both side cells are on the grid.
/// Throws GenerationError for invalid specs or cells without actions.
GridWorld generate(const GridSpec& spec);

/// Frozen 20x20 instance used to compare the action-selection heuristics:
/// reload r2c2, target r17c17, capacity 60, weak success 9/20. Runs start at
/// the reload with a full load (`table2_start`).
GridSpec table2_spec();
GridWorld table2_scenario();
struct StartPoint {
  Cell cell;
  Amount load;
};
StartPoint table2_start();

/// n x n grid with reloads in the four corners and the centre, the centre as
/// the only target, and the given capacity. Used for solver scaling runs.
GridSpec scaling_spec(int size, Amount capacity);

}  // namespace cmdp::grid
