#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmdp/level.hpp"
#include "cmdp/probability.hpp"

namespace cmdp {

using StateId = std::uint32_t;

/// Index of an action within its state's action list.
using ActionId = std::uint32_t;

/// Membership mask over states.
using StateSet = std::vector<bool>;

/// Raised for inputs that do not fit the model's structure (unknown ids,
/// inconsistent paths, unavailable actions).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Successor {
  StateId target;
  Probability probability;
};

struct ActionInfo {
  std::string name;
  Amount consumption = 0;
  std::uint32_t first_successor = 0;
  std::uint32_t successor_count = 0;
};

class CmdpBuilder;

/// Consumption MDP in compressed sparse layout. Immutable once built.
class Cmdp {
 public:
  Cmdp() = default;

  std::size_t num_states() const { return names_.size(); }
  Amount capacity() const { return capacity_; }

  const std::string& state_name(StateId s) const { return names_.at(s); }
  bool is_reload(StateId s) const { return reloads_[s]; }
  const StateSet& reloads() const { return reloads_; }
  std::size_t num_reloads() const;

  std::size_t num_actions(StateId s) const { return action_offsets_[s + 1] - action_offsets_[s]; }
  const ActionInfo& action(StateId s, ActionId a) const { return actions_[action_offsets_[s] + a]; }
  Amount consumption(StateId s, ActionId a) const { return action(s, a).consumption; }
  std::span<const Successor> successors(StateId s, ActionId a) const {
    const ActionInfo& info = action(s, a);
    return {successors_.data() + info.first_successor, info.successor_count};
  }

  /// Probability of moving to `t`, zero when `t` is not a successor.
  double probability(StateId s, ActionId a, StateId t) const;

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<ActionId> find_action(StateId s, std::string_view name) const;

  /// Like find_state but throws ModelError for unknown names.
  StateId state_id(std::string_view name) const;

  /// Same model with a different reload set.
  Cmdp with_reloads(const StateSet& reloads) const;

  /// Mask holding exactly `states`.
  StateSet make_set(std::span<const StateId> states) const;

  void check_state(StateId s) const;
  void check_action(StateId s, ActionId a) const;

 private:
  friend class CmdpBuilder;

  Amount capacity_ = 0;
  std::vector<std::string> names_;
  StateSet reloads_;
  std::vector<std::uint32_t> action_offsets_{0};
  std::vector<ActionInfo> actions_;
  std::vector<Successor> successors_;
  std::unordered_map<std::string, StateId> index_;
};

/// Incremental construction. States must be added before they are referenced
/// by name; ids may be referenced freely.
class CmdpBuilder {
 public:
  explicit CmdpBuilder(Amount capacity);

  StateId add_state(std::string name, bool reload = false);
  void set_reload(StateId s, bool reload);

  /// Entries with probability exactly zero are dropped and repeated targets
  /// are merged. Sums are not checked here; see validate().
  ActionId add_action(StateId s, std::string name, Amount consumption,
                      std::vector<std::pair<StateId, Probability>> distribution);

  /// Convenience for deterministic actions.
  ActionId add_action(StateId s, std::string name, Amount consumption, StateId target);

  std::optional<StateId> find_state(std::string_view name) const;
  std::size_t num_states() const { return names_.size(); }

  Cmdp build() const;

 private:
  struct PendingAction {
    std::string name;
    Amount consumption;
    std::vector<std::pair<StateId, Probability>> distribution;
  };

  Amount capacity_;
  std::vector<std::string> names_;
  std::vector<bool> reloads_;
  std::vector<std::vector<PendingAction>> actions_;
  std::unordered_map<std::string, StateId> index_;
};

}  // namespace cmdp
