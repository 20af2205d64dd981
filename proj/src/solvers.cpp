#include "cmdp/solvers.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmdp {
namespace {

void check_vector(const Cmdp& model, const LevelVector& v, const char* what) {
  if (v.size() != model.num_states())
    throw ModelError(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(model.num_states()));
}

void check_set(const Cmdp& model, const StateSet& set, const char* what) {
  if (set.size() != model.num_states())
    throw ModelError(std::string(what) + " has " + std::to_string(set.size()) + " entries, expected " +
                     std::to_string(model.num_states()));
}

bool any_of(const StateSet& set) { return std::find(set.begin(), set.end(), true) != set.end(); }

std::size_t count_of(const StateSet& set) { return static_cast<std::size_t>(std::count(set.begin(), set.end(), true)); }

/// Values above capacity become infinite; finite values on `zeroed` become 0.
void truncate(LevelVector& v, const StateSet& zeroed, Amount capacity) {
  for (std::size_t s = 0; s < v.size(); ++s) {
    v[s] = cap_truncate(v[s], capacity);
    if (zeroed[s] && v[s].is_finite()) v[s] = Level(0);
  }
}

/// Action value where successors in `zeroed` count as 0.
Level action_value_masked(const Cmdp& model, const LevelVector& values, const StateSet& zeroed, StateId s,
                          ActionId a) {
  Level worst(0);
  for (const Successor& succ : model.successors(s, a)) {
    Level v = zeroed[succ.target] ? Level(0) : values[succ.target];
    if (v > worst) worst = v;
  }
  return model.consumption(s, a) + worst;
}

bool safe_in(const Cmdp& model, const StateSet& reloads, const LevelVector& safety_values, StateId s, ActionId a,
             Amount level) {
  if (safety_values[s] > Level(model.capacity())) return true;
  Level av = action_value(model, safety_values, s, a);
  if (av <= Level(level)) return true;
  return reloads[s] && av <= Level(model.capacity());
}

ActionId min_safe_in(const Cmdp& model, const StateSet& reloads, const LevelVector& safety_values, StateId s) {
  if (safety_values[s].is_infinite()) return 0;
  for (ActionId a = 0; a < model.num_actions(s); ++a)
    if (safe_in(model, reloads, safety_values, s, a, safety_values[s].value())) return a;
  return 0;
}

struct SafetyRun {
  LevelVector values;
  StateSet usable;
  std::vector<PassStats> passes;
};

/// Iterative pruning of reloads that cannot surely reach another usable
/// reload within capacity. `pins` may be empty.
SafetyRun run_safety(const Cmdp& model, const StateSet& reloads, const LevelVector* pins) {
  SafetyRun run;
  run.usable = reloads;
  const Amount cap = model.capacity();
  while (true) {
    std::size_t sweeps = 0;
    LevelVector n = pins ? min_init_cons_pinned(model, *pins, run.usable, &sweeps)
                         : min_init_cons(model, run.usable, &sweeps);
    run.passes.push_back({count_of(run.usable), sweeps, 0});
    bool removed = false;
    for (StateId r = 0; r < model.num_states(); ++r) {
      if (run.usable[r] && n[r] > Level(cap)) {
        run.usable[r] = false;
        removed = true;
      }
    }
    if (!removed) {
      truncate(n, run.usable, cap);
      run.values = std::move(n);
      return run;
    }
  }
}

struct ScoredAction {
  Level value = kInfinity;
  ActionId action = 0;
  /// Probability of the successor the safe value hopes for.
  double hoped = -1.0;
};

ScoredAction score_action(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s,
                          ActionId a, double theta) {
  auto succs = model.successors(s, a);
  // Largest and second largest survival value, for the "all other outcomes"
  // part of the hope value.
  Level top(0);
  Level second(0);
  std::size_t top_index = succs.size();
  for (std::size_t i = 0; i < succs.size(); ++i) {
    Level v = survival[succs[i].target];
    if (top_index == succs.size() || v > top) {
      second = top_index == succs.size() ? Level(0) : top;
      top = v;
      top_index = i;
    } else if (v > second) {
      second = v;
    }
  }

  ScoredAction best;
  best.action = a;
  Level best_hope = kInfinity;
  for (std::size_t i = 0; i < succs.size(); ++i) {
    double p = succs[i].probability.value();
    if (p < theta) continue;
    Level others = (i == top_index) ? second : top;
    Level hope = std::max(values[succs[i].target], others);
    if (hope < best_hope || (hope == best_hope && p > best.hoped)) {
      best_hope = hope;
      best.hoped = p;
    }
  }
  best.value = model.consumption(s, a) + best_hope;
  return best;
}

ScoredAction best_action(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s,
                         double theta, bool goal_leaning) {
  ScoredAction best;
  for (ActionId a = 0; a < model.num_actions(s); ++a) {
    ScoredAction cand = score_action(model, survival, values, s, a, theta);
    if (a == 0 || cand.value < best.value ||
        (goal_leaning && cand.value == best.value && cand.hoped > best.hoped))
      best = cand;
  }
  return best;
}

/// The shared reachability fixpoint: repeatedly replaces each non-target value
/// by its least safe value, truncates, and records improving actions.
std::size_t run_reach_phase(const Cmdp& model, const StateSet& truncation, const StateSet& targets,
                            const LevelVector& survival, double theta, bool goal_leaning, LevelVector& values,
                            RuleSelector& selector, const SweepObserver& observer, std::size_t& sweep_counter) {
  const std::size_t n = model.num_states();
  std::vector<ActionId> chosen(n, 0);
  std::size_t changes = 0;
  while (true) {
    LevelVector old = values;
    for (StateId s = 0; s < n; ++s) {
      if (targets[s]) continue;
      ScoredAction best = best_action(model, survival, old, s, theta, goal_leaning);
      values[s] = best.value;
      chosen[s] = best.action;
    }
    truncate(values, truncation, model.capacity());
    for (StateId s = 0; s < n; ++s)
      if (!targets[s] && values[s] < old[s]) selector.insert(model, s, values[s].value(), chosen[s]);
    ++sweep_counter;
    if (observer) observer(sweep_counter, values);
    if (values == old) return changes;
    ++changes;
  }
}

PassStats run_reach(const Cmdp& model, const StateSet& truncation, const StateSet& targets,
                    const LevelVector& survival, const HeuristicMode& mode, LevelVector& values,
                    RuleSelector& selector, const SweepObserver& observer) {
  PassStats stats;
  stats.reloads = count_of(truncation);
  std::size_t sweeps = 0;
  if (mode.kind == HeuristicKind::Threshold) {
    stats.filtered_iterations =
        run_reach_phase(model, truncation, targets, survival, mode.theta, true, values, selector, observer, sweeps);
  }
  stats.iterations = stats.filtered_iterations + run_reach_phase(model, truncation, targets, survival, 0.0,
                                                                 mode.leans_to_goal(), values, selector,
                                                                 observer, sweeps);
  return stats;
}

void init_selector(const Cmdp& model, const StateSet& reloads, const LevelVector& safety_values,
                   RuleSelector& selector) {
  for (StateId s = 0; s < model.num_states(); ++s)
    if (safety_values[s] <= Level(model.capacity()))
      selector.insert(model, s, safety_values[s].value(), min_safe_in(model, reloads, safety_values, s));
}

void require_targets(const Cmdp& model, const StateSet& targets) {
  check_set(model, targets, "target set");
  if (!any_of(targets)) throw std::invalid_argument("target set must not be empty");
}

SynthesisResult buchi_on(const Cmdp& model, const StateSet& reloads, const StateSet& targets,
                         const HeuristicMode& mode) {
  SynthesisResult result;
  StateSet usable = reloads;
  const Amount cap = model.capacity();
  while (true) {
    SafetyRun safe = run_safety(model, usable, nullptr);
    RuleSelector selector(model.num_states());
    init_selector(model, usable, safe.values, selector);
    LevelVector values(model.num_states(), kInfinity);
    for (StateId t = 0; t < model.num_states(); ++t)
      if (targets[t]) values[t] = safe.values[t];
    PassStats stats = run_reach(model, usable, targets, safe.values, mode, values, selector, {});
    result.passes.push_back(stats);

    bool removed = false;
    for (StateId r = 0; r < model.num_states(); ++r) {
      if (usable[r] && values[r] > Level(cap)) {
        usable[r] = false;
        removed = true;
      }
    }
    if (!removed) {
      selector.normalize();
      result.values = std::move(values);
      result.selector = std::move(selector);
      result.iterations = stats.iterations;
      return result;
    }
  }
}

}  // namespace

HeuristicMode HeuristicMode::threshold(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  return {HeuristicKind::Threshold, theta};
}

std::string to_string(const HeuristicMode& mode) {
  switch (mode.kind) {
    case HeuristicKind::Standard:
      return "standard";
    case HeuristicKind::GoalLeaning:
      return "goal";
    case HeuristicKind::Threshold:
      return "threshold(" + std::to_string(mode.theta) + ")";
  }
  return "unknown";
}

Level action_value(const Cmdp& model, const LevelVector& values, StateId s, ActionId a) {
  Level worst(0);
  for (const Successor& succ : model.successors(s, a))
    if (values[succ.target] > worst) worst = values[succ.target];
  return model.consumption(s, a) + worst;
}

NonReloadingResult non_reloading_reach(const Cmdp& model, const StateSet& targets) {
  require_targets(model, targets);
  const std::size_t n = model.num_states();
  NonReloadingResult result;
  result.values.assign(n, kInfinity);
  for (StateId s = 0; s < n; ++s)
    if (targets[s]) result.values[s] = Level(0);

  while (true) {
    LevelVector next = result.values;
    for (StateId s = 0; s < n; ++s) {
      if (targets[s]) continue;
      Level best = kInfinity;
      for (ActionId a = 0; a < model.num_actions(s); ++a) best = std::min(best, action_value(model, result.values, s, a));
      next[s] = best;
    }
    if (next == result.values) break;
    result.values = std::move(next);
    ++result.iterations;
  }

  result.strategy.actions.assign(n, 0);
  for (StateId s = 0; s < n; ++s) {
    if (targets[s] || result.values[s].is_infinite()) continue;
    for (ActionId a = 0; a < model.num_actions(s); ++a) {
      if (action_value(model, result.values, s, a) == result.values[s]) {
        result.strategy.actions[s] = a;
        break;
      }
    }
  }
  return result;
}

LevelVector min_init_cons(const Cmdp& model, const StateSet& targets, std::size_t* iterations) {
  return min_init_cons_pinned(model, LevelVector(model.num_states(), kInfinity), targets, iterations);
}

LevelVector min_init_cons_pinned(const Cmdp& model, const LevelVector& sink_values, const StateSet& targets,
                                 std::size_t* iterations) {
  check_set(model, targets, "target set");
  check_vector(model, sink_values, "sink vector");
  const std::size_t n = model.num_states();
  LevelVector values(n, kInfinity);
  std::size_t changes = 0;
  while (true) {
    LevelVector old = values;
    for (StateId s = 0; s < n; ++s) {
      if (sink_values[s].is_finite()) {
        values[s] = sink_values[s];
        continue;
      }
      for (ActionId a = 0; a < model.num_actions(s); ++a) {
        Level c = action_value_masked(model, old, targets, s, a);
        if (c < values[s]) values[s] = c;
      }
    }
    if (values == old) break;
    ++changes;
  }
  if (iterations) *iterations = changes;
  return values;
}

SynthesisResult safety(const Cmdp& model) {
  SafetyRun run = run_safety(model, model.reloads(), nullptr);
  SynthesisResult result;
  result.selector = RuleSelector(model.num_states());
  init_selector(model, model.reloads(), run.values, result.selector);
  result.selector.normalize();
  result.values = std::move(run.values);
  result.iterations = run.passes.back().iterations;
  result.passes = std::move(run.passes);
  return result;
}

LevelVector survival_values(const Cmdp& model, const LevelVector& sink_values, const StateSet& reloads) {
  check_vector(model, sink_values, "sink vector");
  check_set(model, reloads, "reload set");
  return run_safety(model, reloads, &sink_values).values;
}

bool is_safe_action(const Cmdp& model, const LevelVector& safety_values, StateId s, ActionId a, Amount level) {
  model.check_action(s, a);
  check_vector(model, safety_values, "safety vector");
  return safe_in(model, model.reloads(), safety_values, s, a, level);
}

ActionId min_safe_action(const Cmdp& model, const LevelVector& safety_values, StateId s) {
  model.check_state(s);
  check_vector(model, safety_values, "safety vector");
  return min_safe_in(model, model.reloads(), safety_values, s);
}

Level hope_value(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s, ActionId a,
                 StateId successor) {
  model.check_action(s, a);
  bool found = false;
  Level others(0);
  for (const Successor& succ : model.successors(s, a)) {
    if (succ.target == successor) {
      found = true;
      continue;
    }
    others = std::max(others, survival[succ.target]);
  }
  if (!found)
    throw ModelError("'" + model.state_name(successor) + "' is not a successor of action '" +
                     model.action(s, a).name + "' in state '" + model.state_name(s) + "'");
  return std::max(values[successor], others);
}

Level safe_value(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s, ActionId a,
                 double theta) {
  model.check_action(s, a);
  return score_action(model, survival, values, s, a, theta).value;
}

ActionId argmin_action(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s,
                       const HeuristicMode& mode) {
  model.check_state(s);
  double theta = mode.kind == HeuristicKind::Threshold ? mode.theta : 0.0;
  return best_action(model, survival, values, s, theta, mode.leans_to_goal()).action;
}

SynthesisResult positive_reachability(const Cmdp& model, const StateSet& targets, const HeuristicMode& mode,
                                      const SweepObserver& observer) {
  require_targets(model, targets);
  SafetyRun safe = run_safety(model, model.reloads(), nullptr);
  SynthesisResult result;
  result.selector = RuleSelector(model.num_states());
  init_selector(model, model.reloads(), safe.values, result.selector);
  result.values.assign(model.num_states(), kInfinity);
  for (StateId t = 0; t < model.num_states(); ++t)
    if (targets[t]) result.values[t] = safe.values[t];
  PassStats stats =
      run_reach(model, model.reloads(), targets, safe.values, mode, result.values, result.selector, observer);
  result.selector.normalize();
  result.iterations = stats.iterations;
  result.passes.push_back(stats);
  return result;
}

SynthesisResult buchi(const Cmdp& model, const StateSet& targets, const HeuristicMode& mode) {
  require_targets(model, targets);
  return buchi_on(model, model.reloads(), targets, mode);
}

SynthesisResult almost_sure_reach(const Cmdp& model, const StateSet& targets, const HeuristicMode& mode) {
  require_targets(model, targets);
  const std::size_t n = model.num_states();
  const Amount cap = model.capacity();
  const LevelVector original = run_safety(model, model.reloads(), nullptr).values;
  LevelVector sink_values(n, kInfinity);
  for (StateId t = 0; t < n; ++t)
    if (targets[t]) sink_values[t] = original[t];

  SynthesisResult result;
  StateSet usable = model.reloads();
  while (true) {
    RuleSelector selector(n);
    init_selector(model, model.reloads(), original, selector);
    LevelVector values = sink_values;
    LevelVector survival = run_safety(model, usable, &sink_values).values;
    PassStats stats = run_reach(model, usable, targets, survival, mode, values, selector, {});
    result.passes.push_back(stats);

    bool removed = false;
    for (StateId r = 0; r < n; ++r) {
      if (usable[r] && values[r] > Level(cap)) {
        usable[r] = false;
        removed = true;
      }
    }
    if (!removed) {
      selector.normalize();
      result.values = std::move(values);
      result.selector = std::move(selector);
      result.iterations = stats.iterations;
      return result;
    }
  }
}

SinkProduct sink_product(const Cmdp& model, const StateSet& targets, const LevelVector& safety_values) {
  check_set(model, targets, "target set");
  check_vector(model, safety_values, "safety vector");
  const std::size_t n = model.num_states();
  CmdpBuilder builder(model.capacity());
  for (StateId s = 0; s < n; ++s) builder.add_state(model.state_name(s), model.is_reload(s));
  std::string sink_name = "sink";
  while (builder.find_state(sink_name)) sink_name += "'";
  StateId sink = builder.add_state(sink_name, true);

  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < model.num_actions(s); ++a) {
      const ActionInfo& info = model.action(s, a);
      if (targets[s]) {
        Amount cost = safety_values[s].is_finite() ? safety_values[s].value() : model.capacity() + 1;
        builder.add_action(s, info.name, cost, sink);
      } else {
        std::vector<std::pair<StateId, Probability>> distribution;
        for (const Successor& succ : model.successors(s, a)) distribution.emplace_back(succ.target, succ.probability);
        builder.add_action(s, info.name, info.consumption, std::move(distribution));
      }
    }
  }
  builder.add_action(sink, "loop", 1, sink);
  return {builder.build(), sink};
}

SynthesisResult almost_sure_reach_via_product(const Cmdp& model, const StateSet& targets,
                                              const HeuristicMode& mode) {
  require_targets(model, targets);
  const std::size_t n = model.num_states();
  const LevelVector original = run_safety(model, model.reloads(), nullptr).values;
  SinkProduct product = sink_product(model, targets, original);
  StateSet sink_only(n + 1, false);
  sink_only[product.sink] = true;
  SynthesisResult lifted = buchi_on(product.model, product.model.reloads(), sink_only, mode);

  SynthesisResult result;
  result.values.assign(lifted.values.begin(), lifted.values.begin() + static_cast<std::ptrdiff_t>(n));
  result.selector = RuleSelector(n);
  for (StateId s = 0; s < n; ++s) {
    if (targets[s]) {
      if (original[s] <= Level(model.capacity()))
        result.selector.insert(model, s, original[s].value(), min_safe_in(model, model.reloads(), original, s));
    } else {
      result.selector.rule(s) = lifted.selector.rule(s);
    }
  }
  result.selector.normalize();
  result.iterations = lifted.iterations;
  result.passes = std::move(lifted.passes);
  return result;
}

SynthesisResult solve(const Cmdp& model, const ObjectiveSpec& objective, const HeuristicMode& mode) {
  switch (objective.kind) {
    case Objective::Safety:
      return safety(model);
    case Objective::NonReloadingReach: {
      NonReloadingResult nr = non_reloading_reach(model, objective.targets);
      SynthesisResult result;
      result.values = std::move(nr.values);
      result.selector = nr.strategy.to_selector();
      result.iterations = nr.iterations;
      result.passes.push_back({0, nr.iterations, 0});
      return result;
    }
    case Objective::PositiveReach:
      return positive_reachability(model, objective.targets, mode);
    case Objective::AlmostSureBuchi:
      return buchi(model, objective.targets, mode);
    case Objective::AlmostSureReach:
      return almost_sure_reach(model, objective.targets, mode);
  }
  throw std::invalid_argument("unknown objective");
}

std::size_t reachability_sweep_bound(std::size_t num_states, std::size_t num_reloads) {
  return num_reloads + (num_reloads + 1) * (num_states - num_reloads + 1);
}

}  // namespace cmdp
