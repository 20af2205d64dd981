#include "cmdp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cmdp {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DistributionSum:
      return "distribution sum";
    case ViolationKind::NonPositiveProbability:
      return "non-positive probability";
    case ViolationKind::EmptyActionSet:
      return "empty action set";
    case ViolationKind::ZeroConsumptionCycle:
      return "zero-consumption cycle";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::vector<StateId> find_zero_consumption_cycle(const Cmdp& model) {
  const std::size_t n = model.num_states();
  std::vector<std::vector<StateId>> edges(n);
  for (StateId s = 0; s < n; ++s)
    for (ActionId a = 0; a < model.num_actions(s); ++a) {
      if (model.consumption(s, a) != 0) continue;
      for (const Successor& succ : model.successors(s, a))
        if (succ.probability.value() > 0.0) edges[s].push_back(succ.target);
    }

  enum class Mark : unsigned char { White, Grey, Black };
  std::vector<Mark> mark(n, Mark::White);
  std::vector<StateId> parent(n, 0);
  struct Frame {
    StateId state;
    std::size_t next;
  };

  for (StateId root = 0; root < n; ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<Frame> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == edges[top.state].size()) {
        mark[top.state] = Mark::Black;
        stack.pop_back();
        continue;
      }
      StateId t = edges[top.state][top.next++];
      if (mark[t] == Mark::Grey) {
        std::vector<StateId> cycle{t};
        for (StateId s = top.state; s != t; s = parent[s]) cycle.push_back(s);
        cycle.push_back(t);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (mark[t] == Mark::White) {
        mark[t] = Mark::Grey;
        parent[t] = top.state;
        stack.push_back({t, 0});
      }
    }
  }
  return {};
}

ValidationReport validate(const Cmdp& model) {
  ValidationReport report;
  for (StateId s = 0; s < model.num_states(); ++s) {
    if (model.num_actions(s) == 0) {
      report.violations.push_back(
          {ViolationKind::EmptyActionSet, s, std::nullopt, {}, "state '" + model.state_name(s) + "' has no actions"});
      continue;
    }
    for (ActionId a = 0; a < model.num_actions(s); ++a) {
      const std::string where = "action '" + model.action(s, a).name + "' in state '" + model.state_name(s) + "'";
      bool all_exact = true;
      Rational exact_sum(0);
      double sum = 0.0;
      for (const Successor& succ : model.successors(s, a)) {
        if (succ.probability.value() <= 0.0)
          report.violations.push_back({ViolationKind::NonPositiveProbability, s, a, {},
                                       where + " has a non-positive probability for '" +
                                           model.state_name(succ.target) + "'"});
        sum += succ.probability.value();
        if (succ.probability.exact())
          exact_sum = exact_sum + *succ.probability.exact();
        else
          all_exact = false;
      }
      bool sums_to_one = all_exact ? exact_sum == Rational(1) : std::abs(sum - 1.0) <= kDistributionTolerance;
      if (!sums_to_one) {
        std::ostringstream msg;
        msg << where << " has distribution sum ";
        if (all_exact)
          msg << exact_sum.to_string();
        else
          msg << sum;
        report.violations.push_back({ViolationKind::DistributionSum, s, a, {}, msg.str()});
      }
    }
  }

  if (auto cycle = find_zero_consumption_cycle(model); !cycle.empty()) {
    std::string msg = "zero-consumption cycle: ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) msg += " -> ";
      msg += model.state_name(cycle[i]);
    }
    StateId first = cycle.front();
    report.violations.push_back({ViolationKind::ZeroConsumptionCycle, first, std::nullopt, std::move(cycle), msg});
  }
  return report;
}

}  // namespace cmdp
