#include "cmdp/gridworld.hpp"

namespace cmdp::grid {
namespace {

constexpr std::array<std::pair<int, int>, 8> kOffsets = {{
    {0, 1},    // E
    {-1, 1},   // NE
    {-1, 0},   // N
    {-1, -1},  // NW
    {0, -1},   // W
    {1, -1},   // SW
    {1, 0},    // S
    {1, 1},    // SE
}};

Cell move(Cell c, Direction d) {
  auto [dr, dc] = kOffsets[static_cast<std::size_t>(d)];
  return {c.row + dr, c.col + dc};
}

Direction rotate(Direction d, int steps) {
  return static_cast<Direction>((static_cast<int>(d) + steps + 8) % 8);
}

bool inside(int size, Cell c) { return c.row >= 0 && c.col >= 0 && c.row < size && c.col < size; }

void check_cells(const GridSpec& spec, const std::vector<Cell>& cells, const char* what) {
  for (Cell c : cells)
    if (!inside(spec.size, c))
      throw GenerationError(std::string(what) + " cell " + cell_name(c) + " is outside the " +
                            std::to_string(spec.size) + "x" + std::to_string(spec.size) + " grid");
}

}  // namespace

std::string to_string(Direction d) {
  static constexpr std::array<const char*, 8> names = {"E", "NE", "N", "NW", "W", "SW", "S", "SE"};
  return names[static_cast<std::size_t>(d)];
}

std::string cell_name(Cell cell) { return "r" + std::to_string(cell.row) + "c" + std::to_string(cell.col); }

StateId cell_state(int size, Cell cell) { return static_cast<StateId>(cell.row * size + cell.col); }

GridWorld generate(const GridSpec& spec) {
  if (spec.size <= 0) throw GenerationError("grid size must be positive");
  if (spec.capacity < 0) throw GenerationError("capacity must be non-negative");
  if (spec.weak_cost < 0 || spec.strong_cost < 0) throw GenerationError("costs must be non-negative");
  if (spec.weak_cost == 0 && spec.strong_cost == 0) throw GenerationError("at least one cost must be positive");
  if (spec.weak_success <= Rational(0) || spec.weak_success > Rational(1))
    throw GenerationError("weak success probability must lie in (0, 1]");
  check_cells(spec, spec.reloads, "reload");
  check_cells(spec, spec.targets, "target");

  const int n = spec.size;
  const Rational side = (Rational(1) - spec.weak_success) / Rational(2);
  CmdpBuilder builder(spec.capacity);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) builder.add_state(cell_name({r, c}));
  for (Cell c : spec.reloads) builder.set_reload(cell_state(n, c), true);

  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const Cell here{r, c};
      const StateId s = cell_state(n, here);
      std::size_t added = 0;
      for (Direction d : spec.directions) {
        Cell ahead = move(here, d);
        Cell left = move(here, rotate(d, 1));
        Cell right = move(here, rotate(d, -1));
        if (!inside(n, ahead) || !inside(n, left) || !inside(n, right)) continue;
        builder.add_action(s, "weak_" + to_string(d), spec.weak_cost,
                           {{cell_state(n, ahead), Probability(spec.weak_success)},
                            {cell_state(n, left), Probability(side)},
                            {cell_state(n, right), Probability(side)}});
        ++added;
      }
      for (Direction d : spec.directions) {
        Cell ahead = move(here, d);
        if (!inside(n, ahead)) continue;
        builder.add_action(s, "strong_" + to_string(d), spec.strong_cost, cell_state(n, ahead));
        ++added;
      }
      if (added == 0) throw GenerationError("cell " + cell_name(here) + " has no available action");
    }
  }

  GridWorld world{builder.build(), {}};
  world.targets.assign(world.model.num_states(), false);
  for (Cell c : spec.targets) world.targets[cell_state(n, c)] = true;
  return world;
}

GridSpec table2_spec() {
  GridSpec spec;
  spec.size = 20;
  spec.reloads = {{2, 2}};
  spec.targets = {{17, 17}};
  spec.capacity = 60;
  spec.weak_success = Rational(9, 20);
  return spec;
}

GridWorld table2_scenario() { return generate(table2_spec()); }

StartPoint table2_start() { return {{2, 2}, 60}; }

GridSpec scaling_spec(int size, Amount capacity) {
  GridSpec spec;
  spec.size = size;
  const int last = size - 1;
  spec.reloads = {{0, 0}, {0, last}, {last, 0}, {last, last}, {size / 2, size / 2}};
  spec.targets = {{size / 2, size / 2}};
  spec.capacity = capacity;
  return spec;
}

}  // namespace cmdp::grid
