#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cmdp/model.hpp"
#include "cmdp/resource.hpp"
#include "cmdp/solvers.hpp"
#include "cmdp/strategy.hpp"

namespace cmdp {

/// SplitMix64 (Steele, Lea, Flood 2014): state advances by 0x9e3779b97f4a7c15
/// and each output is the mixed state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent stream for episode `index` of a run seeded with `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

/// Successor drawn by inverting the cumulative distribution in stored order.
StateId sample_successor(const Cmdp& model, StateId s, ActionId a, double u);

enum class EpisodeStatus { Hit, Censored, Depleted };

struct EpisodeOutcome {
  EpisodeStatus status = EpisodeStatus::Censored;
  /// Steps taken; for hits, the index of the first target visit (the start
  /// state is step 0).
  std::size_t steps = 0;
  /// Decisions taken below every border level of the current rule.
  std::size_t fallback_uses = 0;
};

struct TraceRow {
  std::size_t step = 0;
  StateId state = 0;
  /// Empty on the final row.
  std::optional<ActionId> action;
  ResourceLevel level;
  bool defined = true;
};

struct Episode {
  EpisodeOutcome outcome;
  std::vector<TraceRow> trace;
};

/// Runs `strategy` from (start, load) until a target is visited, the counter
/// depletes, or `max_steps` transitions have been taken.
Episode simulate_episode(const Cmdp& model, CounterStrategy& strategy, const StateSet& targets, StateId start,
                         Amount load, std::size_t max_steps, SplitMix64& rng, bool record_trace = true);

struct SimConfig {
  std::size_t episodes = 10000;
  std::size_t max_steps = 200;
  std::uint64_t seed = 0;
  StateId start = 0;
  Amount load = 0;
  bool record_traces = false;
};

struct ErtReport {
  std::size_t episodes = 0;
  std::size_t hit_count = 0;
  std::size_t censored_count = 0;
  std::size_t depleted_count = 0;
  std::size_t fallback_uses = 0;
  /// Mean first-hit step over hitting episodes.
  std::optional<double> mean;
  std::vector<EpisodeOutcome> outcomes;
  /// Filled when SimConfig::record_traces is set.
  std::vector<std::vector<TraceRow>> traces;
};

/// Throws ModelError for a load outside 0..capacity.
ErtReport estimate_ert(const Cmdp& model, const RuleSelector& selector, const StateSet& targets,
                       const SimConfig& config);

/// Mean with six significant digits, or "<max_steps>+" when nothing hit.
std::string format_mean(const ErtReport& report, std::size_t max_steps);

/// Rows `episode,step,state,action,level` with a header line. Depleted levels
/// print as "depleted", missing actions as an empty field.
void write_trace_csv(std::ostream& out, const Cmdp& model, const ErtReport& report);

struct AuditConfig {
  std::size_t total_steps = 1'000'000;
  std::size_t episode_length = 1000;
  std::uint64_t seed = 1;
};

struct AuditViolation {
  StateId start = 0;
  Amount load = 0;
  std::size_t episode = 0;
  std::size_t step = 0;
  bool depleted = false;
};

struct AuditReport {
  std::size_t steps = 0;
  std::size_t episodes = 0;
  std::size_t depletions = 0;
  std::size_t fallback_uses = 0;
  std::size_t target_visits = 0;
  /// The first few violations, for diagnostics.
  std::vector<AuditViolation> violations;

  bool clean() const { return depletions == 0 && fallback_uses == 0; }
};

/// Runs long episodes of the synthesized selector from every state with a
/// finite value, started at that value, and reports depletion and fallback
/// use. `targets` only feeds the visit count and may be empty.
AuditReport audit_safety(const Cmdp& model, const SynthesisResult& result, const StateSet& targets,
                         const AuditConfig& config);

}  // namespace cmdp
