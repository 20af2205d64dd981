#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cmdp/level.hpp"
#include "cmdp/model.hpp"
#include "cmdp/strategy.hpp"

namespace cmdp {

enum class HeuristicKind { Standard, GoalLeaning, Threshold };

/// Tie-breaking and successor filtering used when picking actions.
struct HeuristicMode {
  HeuristicKind kind = HeuristicKind::Standard;
  /// Successors reached with probability below theta are ignored when
  /// computing safe values. Only used by Threshold.
  double theta = 0.0;

  static HeuristicMode standard() { return {}; }
  static HeuristicMode goal_leaning() { return {HeuristicKind::GoalLeaning, 0.0}; }
  /// Throws std::invalid_argument unless 0 <= theta <= 1.
  static HeuristicMode threshold(double theta);

  bool leans_to_goal() const { return kind != HeuristicKind::Standard; }
};

std::string to_string(const HeuristicMode& mode);

enum class Objective { Safety, NonReloadingReach, PositiveReach, AlmostSureBuchi, AlmostSureReach };

struct ObjectiveSpec {
  Objective kind = Objective::Safety;
  /// May be empty only for Safety.
  StateSet targets;
};

/// Iteration statistics of one run of a fixpoint on a fixed reload set.
struct PassStats {
  std::size_t reloads = 0;
  /// Value-changing sweeps until the fixpoint was confirmed.
  std::size_t iterations = 0;
  /// For threshold mode, the sweeps spent in the filtered phase (included in
  /// iterations).
  std::size_t filtered_iterations = 0;
};

struct SynthesisResult {
  LevelVector values;
  RuleSelector selector;
  /// Sweeps of the last pass.
  std::size_t iterations = 0;
  /// One entry per reload set tried, in order.
  std::vector<PassStats> passes;
};

struct NonReloadingResult {
  LevelVector values;
  MemorylessStrategy strategy;
  std::size_t iterations = 0;
};

/// Called after every sweep of a reachability fixpoint with the 1-based sweep
/// number and the vector after that sweep.
using SweepObserver = std::function<void(std::size_t, const LevelVector&)>;

/// Consumption of `a` plus the worst successor value.
Level action_value(const Cmdp& model, const LevelVector& values, StateId s, ActionId a);

/// Least load that surely reaches `targets` without relying on reloads.
NonReloadingResult non_reloading_reach(const Cmdp& model, const StateSet& targets);

/// Least load that surely reaches `targets` in at least one step without
/// relying on reloads. Values are exact and may exceed the capacity.
LevelVector min_init_cons(const Cmdp& model, const StateSet& targets, std::size_t* iterations = nullptr);

/// Same fixpoint with states where `sink_values` is finite pinned to that
/// value. Equals min_init_cons when no entry is finite.
LevelVector min_init_cons_pinned(const Cmdp& model, const LevelVector& sink_values, const StateSet& targets,
                                 std::size_t* iterations = nullptr);

/// Least load from which resource depletion can be avoided forever.
/// The selector plays a min-safe action in every state with finite value.
SynthesisResult safety(const Cmdp& model);

/// Safety values of the model where states with finite `sink_values` move to
/// an absorbing reload at that cost, restricted to reload set `reloads`.
LevelVector survival_values(const Cmdp& model, const LevelVector& sink_values, const StateSet& reloads);

bool is_safe_action(const Cmdp& model, const LevelVector& safety_values, StateId s, ActionId a, Amount level);

/// First action that is safe at the state's own safety value.
ActionId min_safe_action(const Cmdp& model, const LevelVector& safety_values, StateId s);

/// Load needed after playing `a` in `s` to hold `values[successor]` if the
/// outcome is `successor` and the survival value of any other outcome.
Level hope_value(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s, ActionId a,
                 StateId successor);

/// Consumption plus the best hope value over successors whose probability is
/// at least theta. Infinite when no successor qualifies.
Level safe_value(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s, ActionId a,
                 double theta = 0.0);

/// Action with the least safe value, ties resolved according to `mode`.
ActionId argmin_action(const Cmdp& model, const LevelVector& survival, const LevelVector& values, StateId s,
                       const HeuristicMode& mode);

SynthesisResult positive_reachability(const Cmdp& model, const StateSet& targets,
                                      const HeuristicMode& mode = HeuristicMode::standard(),
                                      const SweepObserver& observer = {});

SynthesisResult buchi(const Cmdp& model, const StateSet& targets,
                      const HeuristicMode& mode = HeuristicMode::standard());

/// Almost-sure reachability computed on the model itself.
SynthesisResult almost_sure_reach(const Cmdp& model, const StateSet& targets,
                                  const HeuristicMode& mode = HeuristicMode::standard());

/// Model where every target moves to a fresh absorbing reload `sink` at the
/// cost of its safety value (capacity + 1 when that value is infinite).
struct SinkProduct {
  Cmdp model;
  StateId sink = 0;
};

SinkProduct sink_product(const Cmdp& model, const StateSet& targets, const LevelVector& safety_values);

/// Almost-sure reachability through Büchi on the sink product, projected back.
SynthesisResult almost_sure_reach_via_product(const Cmdp& model, const StateSet& targets,
                                              const HeuristicMode& mode = HeuristicMode::standard());

SynthesisResult solve(const Cmdp& model, const ObjectiveSpec& objective,
                      const HeuristicMode& mode = HeuristicMode::standard());

/// Sweep bound for positive reachability with the given state and reload
/// counts.
std::size_t reachability_sweep_bound(std::size_t num_states, std::size_t num_reloads);

}  // namespace cmdp
