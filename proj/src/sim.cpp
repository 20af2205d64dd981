#include "cmdp/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace cmdp {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) {
  // state = mix(mix(seed) ^ index * 0xd1b54a32d192ed03).
  SplitMix64 mixer(seed);
  std::uint64_t base = mixer.next();
  SplitMix64 second(base ^ (index * 0xd1b54a32d192ed03ULL));
  return SplitMix64(second.next());
}

StateId sample_successor(const Cmdp& model, StateId s, ActionId a, double u) {
  auto succs = model.successors(s, a);
  double cumulative = 0.0;
  for (const Successor& succ : succs) {
    cumulative += succ.probability.value();
    if (u < cumulative) return succ.target;
  }
  return succs.back().target;
}

Episode simulate_episode(const Cmdp& model, CounterStrategy& strategy, const StateSet& targets, StateId start,
                         Amount load, std::size_t max_steps, SplitMix64& rng, bool record_trace) {
  Episode ep;
  strategy.reset(start, load);
  StateId state = start;
  auto record = [&](std::size_t step, std::optional<ActionId> action, ResourceLevel level, bool defined) {
    if (record_trace) ep.trace.push_back({step, state, action, level, defined});
  };

  if (targets[state]) {
    record(0, std::nullopt, load, true);
    ep.outcome = {EpisodeStatus::Hit, 0, 0};
    return ep;
  }
  for (std::size_t step = 0; step < max_steps; ++step) {
    Selection sel = strategy.select(state);
    if (!sel.defined) ++ep.outcome.fallback_uses;
    record(step, sel.action, strategy.counter(), sel.defined);
    StateId next = sample_successor(model, state, sel.action, rng.uniform());
    ResourceLevel level = strategy.step(state, sel.action, next);
    state = next;
    if (!level) {
      record(step + 1, std::nullopt, level, true);
      ep.outcome.status = EpisodeStatus::Depleted;
      ep.outcome.steps = step + 1;
      return ep;
    }
    if (targets[state]) {
      record(step + 1, std::nullopt, level, true);
      ep.outcome.status = EpisodeStatus::Hit;
      ep.outcome.steps = step + 1;
      return ep;
    }
  }
  record(max_steps, std::nullopt, strategy.counter(), true);
  ep.outcome.status = EpisodeStatus::Censored;
  ep.outcome.steps = max_steps;
  return ep;
}

ErtReport estimate_ert(const Cmdp& model, const RuleSelector& selector, const StateSet& targets,
                       const SimConfig& config) {
  model.check_state(config.start);
  if (config.load < 0 || config.load > model.capacity())
    throw ModelError("load " + std::to_string(config.load) + " outside 0.." + std::to_string(model.capacity()));
  if (targets.size() != model.num_states()) throw ModelError("target set has wrong length");

  ErtReport report;
  report.episodes = config.episodes;
  report.outcomes.reserve(config.episodes);
  CounterStrategy strategy(model, selector);
  double total = 0.0;
  for (std::size_t e = 0; e < config.episodes; ++e) {
    SplitMix64 rng = SplitMix64::stream(config.seed, e);
    Episode ep = simulate_episode(model, strategy, targets, config.start, config.load, config.max_steps, rng,
                                  config.record_traces);
    switch (ep.outcome.status) {
      case EpisodeStatus::Hit:
        ++report.hit_count;
        total += static_cast<double>(ep.outcome.steps);
        break;
      case EpisodeStatus::Censored:
        ++report.censored_count;
        break;
      case EpisodeStatus::Depleted:
        ++report.depleted_count;
        break;
    }
    report.fallback_uses += ep.outcome.fallback_uses;
    report.outcomes.push_back(ep.outcome);
    if (config.record_traces) report.traces.push_back(std::move(ep.trace));
  }
  if (report.hit_count > 0) report.mean = total / static_cast<double>(report.hit_count);
  return report;
}

std::string format_mean(const ErtReport& report, std::size_t max_steps) {
  if (!report.mean) return std::to_string(max_steps) + "+";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", *report.mean);
  return buf;
}

void write_trace_csv(std::ostream& out, const Cmdp& model, const ErtReport& report) {
  out << "episode,step,state,action,level\n";
  for (std::size_t e = 0; e < report.traces.size(); ++e)
    for (const TraceRow& row : report.traces[e]) {
      out << e << ',' << row.step << ',' << model.state_name(row.state) << ',';
      if (row.action) out << model.action(row.state, *row.action).name;
      out << ',';
      if (row.level)
        out << *row.level;
      else
        out << "depleted";
      out << '\n';
    }
}

AuditReport audit_safety(const Cmdp& model, const SynthesisResult& result, const StateSet& targets,
                         const AuditConfig& config) {
  AuditReport report;
  std::vector<StateId> starts;
  for (StateId s = 0; s < model.num_states(); ++s)
    if (result.values[s] <= Level(model.capacity())) starts.push_back(s);
  if (starts.empty() || config.episode_length == 0) return report;

  const std::size_t per_start_steps = (config.total_steps + starts.size() - 1) / starts.size();
  const std::size_t per_start_episodes = std::max<std::size_t>(
      1, (per_start_steps + config.episode_length - 1) / config.episode_length);
  CounterStrategy strategy(model, result.selector);

  std::size_t episode = 0;
  for (StateId start : starts) {
    Amount load = result.values[start].value();
    for (std::size_t k = 0; k < per_start_episodes; ++k, ++episode) {
      SplitMix64 rng = SplitMix64::stream(config.seed, episode);
      strategy.reset(start, load);
      StateId state = start;
      for (std::size_t step = 0; step < config.episode_length; ++step) {
        Selection sel = strategy.select(state);
        if (!sel.defined) {
          ++report.fallback_uses;
          if (report.violations.size() < 16) report.violations.push_back({start, load, episode, step, false});
        }
        StateId next = sample_successor(model, state, sel.action, rng.uniform());
        ResourceLevel level = strategy.step(state, sel.action, next);
        state = next;
        ++report.steps;
        if (!level) {
          ++report.depletions;
          if (report.violations.size() < 16) report.violations.push_back({start, load, episode, step, true});
          break;
        }
        if (!targets.empty() && targets[state]) ++report.target_visits;
      }
      ++report.episodes;
    }
  }
  return report;
}

}  // namespace cmdp
