#pragma once

#include <optional>
#include <vector>

#include "cmdp/model.hpp"

namespace cmdp {

/// Resource level along a path; nullopt stands for depletion.
using ResourceLevel = std::optional<Amount>;

/// Finite path s1 a1 s2 ... sn together with its initial load.
struct LoadedPath {
  Amount initial_load = 0;
  std::vector<StateId> states;
  std::vector<ActionId> actions;
};

/// Level after playing `a` in `s` with `level` available. Reload states refill
/// before paying. Depletion is absorbing.
inline ResourceLevel next_level(const Cmdp& model, StateId s, ActionId a, ResourceLevel level) {
  if (!level) return std::nullopt;
  const Amount cost = model.consumption(s, a);
  if (model.is_reload(s)) {
    if (cost <= model.capacity()) return model.capacity() - cost;
    return std::nullopt;
  }
  if (cost <= *level) return *level - cost;
  return std::nullopt;
}

/// One entry per state of the path. Throws ModelError if the path is not a
/// path of the model or the load is outside 0..capacity.
std::vector<ResourceLevel> resource_levels(const Cmdp& model, const LoadedPath& path);

bool is_safe(const Cmdp& model, const LoadedPath& path);

}  // namespace cmdp
