#include "cmdp/resource.hpp"

#include <algorithm>

namespace cmdp {

std::vector<ResourceLevel> resource_levels(const Cmdp& model, const LoadedPath& path) {
  if (path.states.empty()) throw ModelError("path has no states");
  if (path.actions.size() + 1 != path.states.size())
    throw ModelError("path must alternate states and actions, ending in a state");
  if (path.initial_load < 0 || path.initial_load > model.capacity())
    throw ModelError("initial load outside 0.." + std::to_string(model.capacity()));

  std::vector<ResourceLevel> trace;
  trace.reserve(path.states.size());
  trace.emplace_back(path.initial_load);
  for (std::size_t i = 0; i < path.actions.size(); ++i) {
    StateId s = path.states[i];
    StateId t = path.states[i + 1];
    ActionId a = path.actions[i];
    model.check_action(s, a);
    model.check_state(t);
    if (model.probability(s, a, t) <= 0.0)
      throw ModelError("'" + model.state_name(t) + "' is not a successor of action '" + model.action(s, a).name +
                       "' in state '" + model.state_name(s) + "'");
    trace.push_back(next_level(model, s, a, trace.back()));
  }
  return trace;
}

bool is_safe(const Cmdp& model, const LoadedPath& path) {
  auto trace = resource_levels(model, path);
  return std::all_of(trace.begin(), trace.end(), [](const ResourceLevel& l) { return l.has_value(); });
}

}  // namespace cmdp
