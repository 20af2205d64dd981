#include <doctest.h>

#include <random>

#include "cmdp/level.hpp"
#include "cmdp/model.hpp"
#include "cmdp/probability.hpp"
#include "cmdp/resource.hpp"
#include "cmdp/validate.hpp"
#include "support/example_models.hpp"

using namespace cmdp;
using cmdp::testing::fig1;
using cmdp::testing::frac;

namespace {

LoadedPath path(const Cmdp& m, Amount load, std::initializer_list<const char*> steps) {
  // Alternating state, action, state, ... names.
  LoadedPath p;
  p.initial_load = load;
  bool state_turn = true;
  StateId last = 0;
  for (const char* name : steps) {
    if (state_turn) {
      last = m.state_id(name);
      p.states.push_back(last);
    } else {
      p.actions.push_back(*m.find_action(last, name));
    }
    state_turn = !state_turn;
  }
  return p;
}

std::vector<ResourceLevel> levels(std::initializer_list<std::optional<Amount>> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST_CASE("level order and saturating addition") {
  CHECK(Level(3) < Level(4));
  CHECK(Level(1'000'000) < kInfinity);
  CHECK(Level(2) + Level(3) == Level(5));
  CHECK(Level(2) + kInfinity == kInfinity);
  CHECK(kInfinity + Amount{4} == kInfinity);
  CHECK(to_string(kInfinity) == "inf");
  CHECK(to_string(Level(7)) == "7");
  CHECK(cap_truncate(Level(3), 10) == Level(3));
  CHECK(cap_truncate(Level(10), 10) == Level(10));
  CHECK(cap_truncate(Level(11), 10) == kInfinity);
}

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 10) + Rational(9, 10) == Rational(1));
  CHECK(Rational::parse("3/8") == Rational(3, 8));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(Rational::parse("2") == Rational(2));
  CHECK_THROWS_AS(Rational::parse("x"), ProbabilityFormatError);
  CHECK_THROWS_AS(Rational::parse("1/0"), ProbabilityFormatError);
  CHECK(Rational(1, 8).to_decimal() == std::optional<std::string>("0.125"));
  CHECK_FALSE(Rational(1, 3).to_decimal().has_value());
}

TEST_CASE("builder rejects malformed input") {
  CmdpBuilder b(5);
  StateId s = b.add_state("s");
  CHECK_THROWS_AS(b.add_state("s"), ModelError);
  CHECK_THROWS_AS(b.add_action(s, "a", -1, s), ModelError);
  b.add_action(s, "a", 1, s);
  CHECK_THROWS_AS(b.add_action(s, "a", 2, s), ModelError);
}

TEST_CASE("builder drops zero entries and merges repeated targets") {
  CmdpBuilder b(5);
  StateId s = b.add_state("s");
  StateId t = b.add_state("t");
  b.add_action(s, "a", 1, {{t, frac(1, 4)}, {s, frac(0, 1)}, {t, frac(3, 4)}});
  b.add_action(t, "a", 1, t);
  Cmdp m = b.build();
  REQUIRE(m.successors(s, 0).size() == 1);
  CHECK(m.successors(s, 0)[0].target == t);
  CHECK(m.probability(s, 0, t) == doctest::Approx(1.0));
  CHECK(m.probability(s, 0, s) == 0.0);
}

TEST_CASE("validate: running example is valid") {
  auto inst = fig1();
  CHECK(inst.model.num_states() == 5);
  CHECK(inst.model.num_reloads() == 2);
  CHECK(inst.model.capacity() == 20);
  CHECK(validate(inst.model).ok());
}

TEST_CASE("validate: zero-consumption self loop") {
  CmdpBuilder b(3);
  StateId s = b.add_state("s");
  b.add_action(s, "a", 0, s);
  ValidationReport report = validate(b.build());
  REQUIRE(report.has(ViolationKind::ZeroConsumptionCycle));
  const Violation& v = report.violations.front();
  CHECK(v.cycle == std::vector<StateId>{s, s});
  CHECK(to_string(v.kind) == "zero-consumption cycle");
}

TEST_CASE("validate: longer zero-consumption cycle is reported with a witness") {
  CmdpBuilder b(3);
  StateId x = b.add_state("x");
  StateId y = b.add_state("y");
  StateId z = b.add_state("z");
  b.add_action(x, "a", 0, y);
  b.add_action(y, "a", 1, x);
  b.add_action(y, "b", 0, z);
  b.add_action(z, "a", 0, x);
  Cmdp m = b.build();
  auto cycle = find_zero_consumption_cycle(m);
  REQUIRE(cycle.size() == 4);
  CHECK(cycle.front() == cycle.back());
  for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
    bool edge = false;
    for (ActionId a = 0; a < m.num_actions(cycle[i]); ++a)
      if (m.consumption(cycle[i], a) == 0 && m.probability(cycle[i], a, cycle[i + 1]) > 0) edge = true;
    CHECK(edge);
  }
}

TEST_CASE("validate: distribution sum") {
  CmdpBuilder b(3);
  StateId s = b.add_state("s");
  StateId t = b.add_state("t");
  b.add_action(s, "a", 1, {{t, frac(9, 10)}});
  b.add_action(t, "a", 1, {{s, Probability(0.5)}, {t, Probability(0.5 + 1e-12)}});
  ValidationReport report = validate(b.build());
  CHECK(report.has(ViolationKind::DistributionSum));
  CHECK(report.violations.size() == 1);
  CHECK(report.violations.front().state == s);
}

TEST_CASE("validate: empty action set") {
  CmdpBuilder b(3);
  StateId s = b.add_state("s");
  b.add_state("t");
  b.add_action(s, "a", 1, s);
  CHECK(validate(b.build()).has(ViolationKind::EmptyActionSet));
}

TEST_CASE("resource levels along the running example paths") {
  const Cmdp m = fig1().model;
  auto safe = path(m, 2, {"s", "a", "r", "a", "s", "a", "r", "a", "s"});
  CHECK(resource_levels(m, safe) == levels({2, 0, 19, 17, 19}));
  CHECK(is_safe(m, safe));

  auto unsafe = path(m, 20, {"s", "b", "u", "a", "v", "a", "s", "b", "u", "a", "v", "a", "s", "b", "t"});
  CHECK(resource_levels(m, unsafe) == levels({20, 15, 14, 12, 7, 6, 4, std::nullopt}));
  CHECK_FALSE(is_safe(m, unsafe));

  auto single = path(m, 7, {"u"});
  CHECK(resource_levels(m, single) == levels({7}));
}

TEST_CASE("resource levels reject inconsistent paths") {
  const Cmdp m = fig1().model;
  LoadedPath bad = path(m, 2, {"s", "a", "t"});
  CHECK_THROWS_AS(resource_levels(m, bad), ModelError);
  LoadedPath overload = path(m, 21, {"s"});
  CHECK_THROWS_AS(resource_levels(m, overload), ModelError);
}

TEST_CASE("property: safety is monotone in the load, depletion absorbs, reloads refill") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 300; ++round) {
    auto inst = cmdp::testing::random_instance(5000 + round);
    const Cmdp& m = inst.model;
    LoadedPath p;
    p.states.push_back(static_cast<StateId>(rng() % m.num_states()));
    const std::size_t len = rng() % 12;
    for (std::size_t i = 0; i < len; ++i) {
      StateId s = p.states.back();
      auto a = static_cast<ActionId>(rng() % m.num_actions(s));
      auto succ = m.successors(s, a);
      p.actions.push_back(a);
      p.states.push_back(succ[rng() % succ.size()].target);
    }
    std::optional<Amount> first_safe;
    for (Amount d = 0; d <= m.capacity(); ++d) {
      p.initial_load = d;
      auto trace = resource_levels(m, p);
      REQUIRE(trace.size() == p.states.size());
      CHECK(trace.front() == d);
      bool depleted = false;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        if (depleted) CHECK_FALSE(trace[i].has_value());
        depleted = depleted || !trace[i];
        if (i > 0 && trace[i - 1] && m.is_reload(p.states[i - 1]) &&
            m.consumption(p.states[i - 1], p.actions[i - 1]) <= m.capacity())
          CHECK(trace[i] == m.capacity() - m.consumption(p.states[i - 1], p.actions[i - 1]));
      }
      const bool safe = is_safe(m, p);
      CHECK(safe == !depleted);
      if (safe && !first_safe) first_safe = d;
      if (first_safe) CHECK(safe);
    }
  }
}
