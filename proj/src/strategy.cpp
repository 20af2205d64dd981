#include "cmdp/strategy.hpp"

namespace cmdp {

Selection Rule::select(Amount level) const {
  auto it = borders_.upper_bound(level);
  if (it == borders_.begin()) return {0, false};
  return {std::prev(it)->second, true};
}

void RuleSelector::insert(const Cmdp& model, StateId s, Amount level, ActionId action) {
  model.check_action(s, action);
  if (s >= rules_.size()) throw ModelError("selector does not cover state " + std::to_string(s));
  if (level < 0 || level > model.capacity())
    throw ModelError("border level " + std::to_string(level) + " outside 0.." + std::to_string(model.capacity()));
  rules_[s].set(level, action);
}

void RuleSelector::normalize() {
  for (Rule& rule : rules_) {
    if (rule.empty()) continue;
    Rule compact;
    bool first = true;
    ActionId previous = 0;
    for (const auto& [border, action] : rule.borders()) {
      if (first) {
        compact.set(0, action);
      } else if (action != previous) {
        compact.set(border, action);
      }
      previous = action;
      first = false;
    }
    rule = std::move(compact);
  }
}

std::size_t RuleSelector::border_count() const {
  std::size_t total = 0;
  for (const Rule& r : rules_) total += r.size();
  return total;
}

CounterStrategy::CounterStrategy(const Cmdp& model, const RuleSelector& selector)
    : model_(&model), selector_(&selector) {
  if (selector.size() != model.num_states()) throw ModelError("selector size does not match the model");
}

void CounterStrategy::reset(StateId state, Amount load) {
  model_->check_state(state);
  if (load < 0 || load > model_->capacity())
    throw ModelError("initial load outside 0.." + std::to_string(model_->capacity()));
  counter_ = load;
}

Selection CounterStrategy::select(StateId state) const {
  if (!counter_) throw ResourceExhausted("resource exhausted in state '" + model_->state_name(state) + "'");
  return selector_->rule(state).select(*counter_);
}

ResourceLevel CounterStrategy::step(StateId state, ActionId action, StateId next_state) {
  model_->check_action(state, action);
  model_->check_state(next_state);
  counter_ = next_level(*model_, state, action, counter_);
  return counter_;
}

RuleSelector MemorylessStrategy::to_selector() const {
  RuleSelector selector(actions.size());
  for (StateId s = 0; s < actions.size(); ++s) selector.rule(s).set(0, actions[s]);
  return selector;
}

}  // namespace cmdp
