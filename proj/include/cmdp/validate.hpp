#pragma once

#include <string>
#include <vector>

#include "cmdp/model.hpp"

namespace cmdp {

enum class ViolationKind {
  DistributionSum,
  NonPositiveProbability,
  EmptyActionSet,
  ZeroConsumptionCycle,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  StateId state = 0;
  /// Set for distribution-related violations.
  std::optional<ActionId> action;
  /// For ZeroConsumptionCycle: states along the cycle, first state repeated
  /// at the end.
  std::vector<StateId> cycle;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Tolerance on distribution sums given as floating point.
inline constexpr double kDistributionTolerance = 1e-9;

ValidationReport validate(const Cmdp& model);

/// Some cycle of the zero-consumption edge graph, empty if it is acyclic.
std::vector<StateId> find_zero_consumption_cycle(const Cmdp& model);

}  // namespace cmdp
