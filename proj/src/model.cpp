#include "cmdp/model.hpp"

#include <algorithm>

namespace cmdp {

std::size_t Cmdp::num_reloads() const {
  return static_cast<std::size_t>(std::count(reloads_.begin(), reloads_.end(), true));
}

double Cmdp::probability(StateId s, ActionId a, StateId t) const {
  for (const Successor& succ : successors(s, a))
    if (succ.target == t) return succ.probability.value();
  return 0.0;
}

std::optional<StateId> Cmdp::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> Cmdp::find_action(StateId s, std::string_view name) const {
  check_state(s);
  for (ActionId a = 0; a < num_actions(s); ++a)
    if (action(s, a).name == name) return a;
  return std::nullopt;
}

StateId Cmdp::state_id(std::string_view name) const {
  if (auto s = find_state(name)) return *s;
  throw ModelError("unknown state '" + std::string(name) + "'");
}

Cmdp Cmdp::with_reloads(const StateSet& reloads) const {
  if (reloads.size() != num_states()) throw ModelError("reload mask has wrong length");
  Cmdp copy = *this;
  copy.reloads_ = reloads;
  return copy;
}

StateSet Cmdp::make_set(std::span<const StateId> states) const {
  StateSet set(num_states(), false);
  for (StateId s : states) {
    check_state(s);
    set[s] = true;
  }
  return set;
}

void Cmdp::check_state(StateId s) const {
  if (s >= num_states()) throw ModelError("state id " + std::to_string(s) + " out of range");
}

void Cmdp::check_action(StateId s, ActionId a) const {
  check_state(s);
  if (a >= num_actions(s))
    throw ModelError("action id " + std::to_string(a) + " not available in state '" + names_[s] + "'");
}

CmdpBuilder::CmdpBuilder(Amount capacity) : capacity_(capacity) {
  if (capacity < 0) throw ModelError("capacity must be non-negative");
}

StateId CmdpBuilder::add_state(std::string name, bool reload) {
  if (index_.count(name)) throw ModelError("duplicate state '" + name + "'");
  auto id = static_cast<StateId>(names_.size());
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  reloads_.push_back(reload);
  actions_.emplace_back();
  return id;
}

void CmdpBuilder::set_reload(StateId s, bool reload) {
  if (s >= names_.size()) throw ModelError("state id out of range");
  reloads_[s] = reload;
}

ActionId CmdpBuilder::add_action(StateId s, std::string name, Amount consumption,
                                 std::vector<std::pair<StateId, Probability>> distribution) {
  if (s >= names_.size()) throw ModelError("state id out of range");
  if (consumption < 0)
    throw ModelError("negative consumption on action '" + name + "' in state '" + names_[s] + "'");
  for (const auto& existing : actions_[s])
    if (existing.name == name)
      throw ModelError("duplicate action '" + name + "' in state '" + names_[s] + "'");

  std::vector<std::pair<StateId, Probability>> merged;
  for (auto& [target, p] : distribution) {
    if (target >= names_.size()) throw ModelError("successor id out of range");
    if (p.value() == 0.0 && (!p.exact() || p.exact()->numerator() == 0)) continue;
    auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& e) { return e.first == target; });
    if (it == merged.end())
      merged.emplace_back(target, p);
    else
      it->second = it->second + p;
  }
  actions_[s].push_back({std::move(name), consumption, std::move(merged)});
  return static_cast<ActionId>(actions_[s].size() - 1);
}

ActionId CmdpBuilder::add_action(StateId s, std::string name, Amount consumption, StateId target) {
  return add_action(s, std::move(name), consumption, {{target, Probability(Rational(1))}});
}

std::optional<StateId> CmdpBuilder::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Cmdp CmdpBuilder::build() const {
  Cmdp m;
  m.capacity_ = capacity_;
  m.names_ = names_;
  m.reloads_ = reloads_;
  m.index_ = index_;
  m.action_offsets_.assign(1, 0);
  for (const auto& list : actions_) {
    for (const PendingAction& pa : list) {
      ActionInfo info;
      info.name = pa.name;
      info.consumption = pa.consumption;
      info.first_successor = static_cast<std::uint32_t>(m.successors_.size());
      info.successor_count = static_cast<std::uint32_t>(pa.distribution.size());
      for (const auto& [t, p] : pa.distribution) m.successors_.push_back({t, p});
      m.actions_.push_back(std::move(info));
    }
    m.action_offsets_.push_back(static_cast<std::uint32_t>(m.actions_.size()));
  }
  return m;
}

}  // namespace cmdp
