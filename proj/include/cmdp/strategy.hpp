#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "cmdp/model.hpp"
#include "cmdp/resource.hpp"

namespace cmdp {

struct Selection {
  ActionId action = 0;
  /// False when the level lies below every border level and the state's
  /// first action was used instead.
  bool defined = false;
};

/// Maps border levels to actions. The action for level l is the one stored at
/// the largest border not above l.
class Rule {
 public:
  Rule() = default;
  Rule(std::initializer_list<std::pair<const Amount, ActionId>> entries) : borders_(entries) {}

  Selection select(Amount level) const;

  /// Overwrites an existing border.
  void set(Amount border, ActionId action) { borders_[border] = action; }
  void erase(Amount border) { borders_.erase(border); }

  bool empty() const { return borders_.empty(); }
  std::size_t size() const { return borders_.size(); }
  const std::map<Amount, ActionId>& borders() const { return borders_; }

  friend bool operator==(const Rule&, const Rule&) = default;

 private:
  std::map<Amount, ActionId> borders_;
};

/// One rule per state.
class RuleSelector {
 public:
  RuleSelector() = default;
  explicit RuleSelector(std::size_t num_states) : rules_(num_states) {}

  std::size_t size() const { return rules_.size(); }
  const Rule& rule(StateId s) const { return rules_.at(s); }
  Rule& rule(StateId s) { return rules_.at(s); }

  /// Throws ModelError if the action is unavailable or the level is outside
  /// 0..capacity.
  void insert(const Cmdp& model, StateId s, Amount level, ActionId action);

  /// Drops borders that repeat the action of the border below them and moves
  /// each rule's lowest border down to 0.
  void normalize();

  /// Total number of border levels over all states.
  std::size_t border_count() const;

  friend bool operator==(const RuleSelector&, const RuleSelector&) = default;

 private:
  std::vector<Rule> rules_;
};

class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strategy driven by a resource counter. Holds references to the model and
/// selector, which must outlive it.
class CounterStrategy {
 public:
  CounterStrategy(const Cmdp& model, const RuleSelector& selector);

  /// Starts a new history in `state` with `load`.
  void reset(StateId state, Amount load);

  /// Selection for the current counter. Throws ResourceExhausted once the
  /// counter is depleted.
  Selection select(StateId state) const;
  ActionId next(StateId state) const { return select(state).action; }

  /// Applies one transition to the counter and returns the new value.
  ResourceLevel step(StateId state, ActionId action, StateId next_state);

  ResourceLevel counter() const { return counter_; }

 private:
  const Cmdp* model_;
  const RuleSelector* selector_;
  ResourceLevel counter_;
};

/// One fixed action per state.
struct MemorylessStrategy {
  std::vector<ActionId> actions;

  ActionId operator()(StateId s) const { return actions.at(s); }

  /// Selector playing the same action at every level.
  RuleSelector to_selector() const;
};

}  // namespace cmdp
