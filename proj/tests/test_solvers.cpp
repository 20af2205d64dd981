#include <doctest.h>

#include "cmdp/solvers.hpp"
#include "cmdp/validate.hpp"
#include "support/example_models.hpp"
#include "support/witness.hpp"

using namespace cmdp;
using namespace cmdp::testing;

namespace {

constexpr ActionId kA = 0;
constexpr ActionId kB = 1;
const Level kInf = kInfinity;

LevelVector vec(std::initializer_list<Level> xs) { return {xs.begin(), xs.end()}; }
Level L(Amount x) { return Level(x); }

StateSet all_states(const Cmdp& m) { return StateSet(m.num_states(), true); }

const std::vector<HeuristicMode>& all_modes() {
  static const std::vector<HeuristicMode> modes = {HeuristicMode::standard(), HeuristicMode::goal_leaning(),
                                                   HeuristicMode::threshold(0.0), HeuristicMode::threshold(0.3),
                                                   HeuristicMode::threshold(0.5)};
  return modes;
}

}  // namespace

TEST_CASE("action value") {
  const Cmdp m = fig1().model;
  const LevelVector safe = vec({L(2), L(0), L(0), L(5), L(4)});
  CHECK(action_value(m, safe, m.state_id("u"), kA) == L(5));
  CHECK(action_value(m, safe, m.state_id("s"), kB) == L(10));
  const LevelVector with_inf = vec({L(2), L(0), L(0), kInf, L(4)});
  CHECK(action_value(m, with_inf, m.state_id("s"), kB) == kInf);

  CmdpBuilder b(4);
  StateId x = b.add_state("x");
  StateId y = b.add_state("y");
  b.add_action(x, "a", 0, y);
  b.add_action(y, "a", 1, y);
  Cmdp z = b.build();
  CHECK(action_value(z, vec({L(9), L(3)}), x, 0) == L(3));
}

TEST_CASE("non-reloading reachability") {
  const Cmdp m = fig1().model;
  NonReloadingResult r = non_reloading_reach(m, set_of(m, {"r", "t"}));
  CHECK(r.values == vec({L(2), L(0), L(0), L(5), L(4)}));
  CHECK(r.iterations <= m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s)
    if (m.state_name(s) != "r" && m.state_name(s) != "t")
      CHECK(action_value(m, r.values, s, r.strategy(s)) == r.values[s]);

  CHECK(non_reloading_reach(m, all_states(m)).values == LevelVector(5, L(0)));

  CmdpBuilder b(4);
  StateId x = b.add_state("x");
  StateId y = b.add_state("y");
  b.add_action(x, "a", 1, x);
  b.add_action(y, "a", 1, x);
  Cmdp iso = b.build();
  CHECK(non_reloading_reach(iso, set_of(iso, {"y"})).values == vec({kInf, L(0)}));
}

TEST_CASE("minimal initial consumption") {
  const Cmdp m = fig1().model;
  std::size_t iters = 0;
  CHECK(min_init_cons(m, m.reloads(), &iters) == vec({L(2), L(1), L(3), L(5), L(4)}));
  CHECK(iters <= m.num_states());

  const Cmdp d = fig2();
  CHECK(min_init_cons(d, d.reloads()) == vec({L(3), L(1), L(1), kInf, L(2), kInf}));

  // D({u, v, x}): from u the step to v reaches a target after 1 unit. The
  // value 5 at u only arises once v is dropped as well.
  const Cmdp d3 = fig2({"u", "v", "x"});
  CHECK(min_init_cons(d3, d3.reloads()) == vec({L(3), L(1), kInf, kInf, kInf, kInf}));
  const Cmdp d1 = fig2({"u"});
  CHECK(min_init_cons(d1, d1.reloads()) == vec({L(3), L(5), kInf, kInf, kInf, kInf}));
}

TEST_CASE("safety") {
  const Cmdp m = fig1().model;
  SynthesisResult r = safety(m);
  CHECK(r.values == vec({L(2), L(0), L(0), L(5), L(4)}));
  CHECK(r.selector.rule(m.state_id("s")) == Rule{{0, kA}});

  const Cmdp d = fig2();
  SynthesisResult rd = safety(d);
  CHECK(rd.values == vec({L(3), L(0), kInf, kInf, kInf, kInf}));
  CHECK(rd.passes.size() == 3);
  CHECK(rd.passes[0].reloads == 4);
  CHECK(rd.passes[1].reloads == 3);
  CHECK(rd.passes[2].reloads == 1);

  CmdpBuilder b(5);
  StateId x = b.add_state("x");
  StateId y = b.add_state("y");
  b.add_action(x, "a", 1, y);
  b.add_action(y, "a", 2, x);
  CHECK(safety(b.build()).values == vec({kInf, kInf}));
}

TEST_CASE("safe actions") {
  const Cmdp m = fig1().model;
  const LevelVector ml = safety(m).values;
  const StateId s = m.state_id("s");
  CHECK(is_safe_action(m, ml, s, kA, 2));
  CHECK_FALSE(is_safe_action(m, ml, s, kB, 2));
  CHECK(is_safe_action(m, ml, s, kB, 10));
  CHECK(min_safe_action(m, ml, s) == kA);

  const Cmdp d = fig2();
  const LevelVector mld = safety(d).values;
  const StateId y = d.state_id("y");
  for (Amount l = 0; l <= d.capacity(); ++l) CHECK(is_safe_action(d, mld, y, 0, l));
  // Reload clause: from u, the step to t is safe at any level.
  CHECK(is_safe_action(d, mld, d.state_id("u"), 0, 0));
}

TEST_CASE("hope and safe values") {
  const Cmdp m = fig1().model;
  const LevelVector ml = safety(m).values;
  const LevelVector yT = vec({kInf, L(0), kInf, kInf, kInf});
  const StateId s = m.state_id("s");
  CHECK(hope_value(m, ml, yT, s, kB, m.state_id("t")) == L(5));
  CHECK(hope_value(m, ml, yT, s, kB, m.state_id("u")) == kInf);
  CHECK(hope_value(m, ml, yT, s, kA, m.state_id("r")) == kInf);
  CHECK(hope_value(m, ml, ml, m.state_id("u"), kA, m.state_id("v")) == L(4));
  CHECK_THROWS_AS(hope_value(m, ml, yT, s, kA, m.state_id("t")), ModelError);
  CHECK(safe_value(m, ml, yT, s, kB) == L(10));
  CHECK(safe_value(m, ml, yT, s, kA) == kInf);
  CHECK(safe_value(m, ml, ml, m.state_id("u"), kA, 1.0) == L(5));

  auto f7 = fig7();
  const Cmdp& m7 = f7.model;
  const LevelVector ml7 = safety(m7).values;
  LevelVector only_v(m7.num_states(), kInf);
  only_v[m7.state_id("v")] = L(0);
  const StateId s7 = m7.state_id("s");
  CHECK(safe_value(m7, ml7, only_v, s7, kB, 0.3) == kInf);
  CHECK(safe_value(m7, ml7, only_v, s7, kB, 0.0) == L(1));
}

TEST_CASE("argmin action by mode") {
  auto f6 = fig6();
  const Cmdp& m6 = f6.model;
  const LevelVector ml6 = safety(m6).values;
  const LevelVector final6 = almost_sure_reach(m6, f6.targets).values;
  const StateId s6 = m6.state_id("s");
  CHECK(safe_value(m6, ml6, final6, s6, kA) == safe_value(m6, ml6, final6, s6, kB));
  CHECK(argmin_action(m6, ml6, final6, s6, HeuristicMode::goal_leaning()) == kA);
  CHECK(argmin_action(m6, ml6, final6, s6, HeuristicMode::standard()) == kA);

  // Second sweep: v and t known, r not yet. b hopes for v with 1/10.
  LevelVector second(m6.num_states(), kInf);
  second[m6.state_id("t")] = L(0);
  second[m6.state_id("u")] = L(1);
  second[m6.state_id("v")] = L(0);
  CHECK(argmin_action(m6, ml6, second, s6, HeuristicMode::goal_leaning()) == kA);

  auto f7 = fig7();
  const Cmdp& m7 = f7.model;
  const LevelVector ml7 = safety(m7).values;
  LevelVector second7(m7.num_states(), kInf);
  second7[m7.state_id("t")] = L(0);
  second7[m7.state_id("u")] = L(1);
  second7[m7.state_id("v")] = L(0);
  for (const HeuristicMode& mode : {HeuristicMode::standard(), HeuristicMode::goal_leaning()})
    CHECK(argmin_action(m7, ml7, second7, m7.state_id("s"), mode) == kB);

  const Cmdp d = fig2();
  for (const HeuristicMode& mode : all_modes())
    CHECK(argmin_action(d, safety(d).values, safety(d).values, d.state_id("t"), mode) == 0);
}

TEST_CASE("positive reachability on the running example") {
  auto inst = fig1();
  const Cmdp& m = inst.model;
  for (const HeuristicMode& mode : all_modes()) {
    std::vector<LevelVector> sweeps;
    SynthesisResult r =
        positive_reachability(m, inst.targets, mode, [&](std::size_t, const LevelVector& v) { sweeps.push_back(v); });
    REQUIRE_FALSE(sweeps.empty());
    if (mode.kind != HeuristicKind::Threshold || mode.theta == 0.0)
      CHECK(sweeps.front() == vec({L(10), L(0), kInf, kInf, kInf}));
    CHECK(r.values == vec({L(2), L(0), L(0), L(5), L(4)}));
    CHECK(r.selector.rule(m.state_id("s")) == Rule{{0, kA}, {10, kB}});
  }
  const LevelVector ml = safety(m).values;
  CHECK(positive_reachability(m, all_states(m)).values == ml);
}

TEST_CASE("Buchi") {
  auto inst = fig1();
  const Cmdp& m = inst.model;
  CHECK(buchi(m, inst.targets).values == vec({L(2), L(0), L(0), L(5), L(4)}));

  // Target reachable once, never again.
  CmdpBuilder b(6);
  StateId x = b.add_state("x", true);
  StateId y = b.add_state("y");
  StateId z = b.add_state("z");
  b.add_action(x, "a", 1, y);
  b.add_action(y, "a", 1, z);
  b.add_action(z, "a", 1, z);
  Cmdp once = b.build();
  CHECK(buchi(once, set_of(once, {"y"})).values == vec({kInf, kInf, kInf}));

  CmdpBuilder c(2);
  StateId p = c.add_state("p", true);
  StateId q = c.add_state("q", true);
  c.add_action(p, "a", 2, q);
  c.add_action(q, "a", 1, {{p, frac(1, 2)}, {q, frac(1, 2)}});
  Cmdp loop = c.build();
  CHECK(buchi(loop, all_states(loop)).values == vec({L(0), L(0)}));
}

TEST_CASE("almost-sure reachability on the heuristic examples") {
  auto f6 = fig6();
  auto f7 = fig7();
  auto f8 = fig8();
  for (const HeuristicMode& mode : all_modes()) {
    SynthesisResult d6 = almost_sure_reach(f6.model, f6.targets, mode);
    CHECK(d6.values == vec({L(2), L(0), L(1), L(0), L(0)}));
    CHECK(almost_sure_reach_via_product(f6.model, f6.targets, mode).values == d6.values);
    SynthesisResult d7 = almost_sure_reach(f7.model, f7.targets, mode);
    CHECK(d7.values == vec({L(1), L(0), L(1), L(0), L(0)}));
    CHECK(almost_sure_reach_via_product(f7.model, f7.targets, mode).values == d7.values);
    SynthesisResult d8 = almost_sure_reach(f8.model, f8.targets, mode);
    CHECK(d8.values == vec({L(0), L(0), L(1), L(1)}));
    CHECK(almost_sure_reach_via_product(f8.model, f8.targets, mode).values == d8.values);
  }
  // The threshold strategy plays a from 2 upwards and b below.
  SynthesisResult th = almost_sure_reach(f7.model, f7.targets, HeuristicMode::threshold(0.2));
  CHECK(th.selector.rule(f7.model.state_id("s")) == Rule{{0, kB}, {2, kA}});
  SynthesisResult gl = almost_sure_reach(f6.model, f6.targets, HeuristicMode::goal_leaning());
  CHECK(gl.selector.rule(f6.model.state_id("s")) == Rule{{0, kA}});
  SynthesisResult gl8 = almost_sure_reach(f8.model, f8.targets, HeuristicMode::goal_leaning());
  CHECK(gl8.selector.rule(f8.model.state_id("s")) == Rule{{0, kB}});
}

TEST_CASE("pinned consumption matches the explicit sink product") {
  auto f6 = fig6();
  const Cmdp& m = f6.model;
  const LevelVector ml = safety(m).values;
  LevelVector sink(m.num_states(), kInf);
  for (StateId s = 0; s < m.num_states(); ++s)
    if (f6.targets[s]) sink[s] = ml[s];
  LevelVector pinned = min_init_cons_pinned(m, sink, m.reloads());

  SinkProduct prod = sink_product(m, f6.targets, ml);
  CHECK(validate(prod.model).ok());
  StateSet reloads_and_sink = prod.model.reloads();
  LevelVector full = min_init_cons(prod.model, reloads_and_sink);
  for (StateId s = 0; s < m.num_states(); ++s) CHECK(full[s] == pinned[s]);
  CHECK(pinned[m.state_id("t")] == ml[m.state_id("t")]);

  const LevelVector none(m.num_states(), kInf);
  CHECK(min_init_cons_pinned(m, none, m.reloads()) == min_init_cons(m, m.reloads()));
}

TEST_CASE("sink product naming and costs") {
  CmdpBuilder b(3);
  StateId sink = b.add_state("sink");
  StateId y = b.add_state("y");
  b.add_action(sink, "a", 1, y);
  b.add_action(y, "a", 4, sink);
  Cmdp m = b.build();
  StateSet targets = set_of(m, {"y"});
  SinkProduct prod = sink_product(m, targets, safety(m).values);
  CHECK(prod.model.state_name(prod.sink) == "sink'");
  CHECK(prod.model.is_reload(prod.sink));
  CHECK(prod.model.consumption(y, 0) == 4);
}

TEST_CASE("solve dispatches on the objective") {
  auto inst = fig6();
  const Cmdp& m = inst.model;
  CHECK(solve(m, {Objective::Safety, {}}).values == safety(m).values);
  CHECK(solve(m, {Objective::PositiveReach, inst.targets}).values == positive_reachability(m, inst.targets).values);
  CHECK(solve(m, {Objective::AlmostSureBuchi, inst.targets}).values == buchi(m, inst.targets).values);
  CHECK(solve(m, {Objective::AlmostSureReach, inst.targets}).values == almost_sure_reach(m, inst.targets).values);
  CHECK(solve(m, {Objective::NonReloadingReach, inst.targets}).values ==
        non_reloading_reach(m, inst.targets).values);
  CHECK_THROWS_AS(solve(m, {Objective::PositiveReach, StateSet(m.num_states(), false)}), std::invalid_argument);
  CHECK_THROWS_AS(HeuristicMode::threshold(1.5), std::invalid_argument);
  CHECK_THROWS_AS(HeuristicMode::threshold(-0.1), std::invalid_argument);
}

TEST_CASE("property: orderings, invariance and reduction on the random corpus") {
  for (const Instance& inst : random_corpus(150, 40000)) {
    const Cmdp& m = inst.model;
    REQUIRE(validate(m).ok());
    const LevelVector ml = safety(m).values;
    const LevelVector pos = positive_reachability(m, inst.targets).values;
    const LevelVector bu = buchi(m, inst.targets).values;
    const LevelVector as = almost_sure_reach(m, inst.targets).values;
    for (StateId s = 0; s < m.num_states(); ++s) {
      CHECK(ml[s] <= pos[s]);
      CHECK(pos[s] <= as[s]);
      CHECK(pos[s] <= bu[s]);
    }
    CHECK(almost_sure_reach_via_product(m, inst.targets).values == as);
    for (const HeuristicMode& mode : all_modes()) {
      CHECK(positive_reachability(m, inst.targets, mode).values == pos);
      CHECK(buchi(m, inst.targets, mode).values == bu);
      CHECK(almost_sure_reach(m, inst.targets, mode).values == as);
    }
  }
}

TEST_CASE("property: sweeps never increase any entry") {
  for (const Instance& inst : random_corpus(100, 41000)) {
    LevelVector previous(inst.model.num_states(), kInf);
    bool first = true;
    positive_reachability(inst.model, inst.targets, HeuristicMode::standard(),
                          [&](std::size_t, const LevelVector& v) {
                            if (!first)
                              for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] <= previous[i]);
                            previous = v;
                            first = false;
                          });
  }
}

TEST_CASE("property: safety witness only plays safe actions") {
  for (const Instance& inst : random_corpus(100, 42000)) {
    const Cmdp& m = inst.model;
    SynthesisResult r = safety(m);
    for (StateId s = 0; s < m.num_states(); ++s) {
      if (r.values[s].is_infinite()) continue;
      for (Amount l = r.values[s].value(); l <= m.capacity(); ++l) {
        Selection sel = r.selector.rule(s).select(l);
        CHECK(sel.defined);
        CHECK(is_safe_action(m, r.values, s, sel.action, l));
      }
      ChainCheck c = explore(m, r.selector, StateSet(m.num_states(), false), r.values, s, r.values[s].value(), false);
      CHECK_FALSE(c.depletes);
      CHECK_FALSE(c.uses_fallback);
    }
  }
}

TEST_CASE("property: witnesses realise their objectives") {
  for (const Instance& inst : random_corpus(120, 43000)) {
    const Cmdp& m = inst.model;
    for (const HeuristicMode& mode : all_modes()) {
      SynthesisResult pos = positive_reachability(m, inst.targets, mode);
      SynthesisResult bu = buchi(m, inst.targets, mode);
      SynthesisResult as = almost_sure_reach(m, inst.targets, mode);
      SynthesisResult asp = almost_sure_reach_via_product(m, inst.targets, mode);
      for (StateId s = 0; s < m.num_states(); ++s) {
        if (pos.values[s].is_finite()) {
          ChainCheck c = explore(m, pos.selector, inst.targets, pos.values, s, pos.values[s].value(), true);
          CHECK_FALSE(c.depletes);
          CHECK_FALSE(c.uses_fallback);
          CHECK(c.has_covered_path);
        }
        if (bu.values[s].is_finite()) {
          ChainCheck c = explore(m, bu.selector, inst.targets, bu.values, s, bu.values[s].value(), false);
          CHECK_FALSE(c.depletes);
          CHECK_FALSE(c.uses_fallback);
          CHECK_FALSE(c.target_escapes);
        }
        for (const SynthesisResult* r : {&as, &asp}) {
          if (r->values[s].is_infinite()) continue;
          ChainCheck c = explore(m, r->selector, inst.targets, r->values, s, r->values[s].value(), true);
          CHECK_FALSE(c.depletes);
          CHECK_FALSE(c.uses_fallback);
          CHECK_FALSE(c.target_escapes);
        }
      }
    }
  }
}

TEST_CASE("property: iteration bounds and selector size") {
  for (const Instance& inst : random_corpus(150, 44000)) {
    const Cmdp& m = inst.model;
    std::size_t iters = 0;
    min_init_cons(m, m.reloads(), &iters);
    CHECK(iters <= m.num_states());
    CHECK(non_reloading_reach(m, inst.targets).iterations <= m.num_states());
    for (const PassStats& p : safety(m).passes) CHECK(p.iterations <= m.num_states());

    for (const HeuristicMode& mode : all_modes()) {
      SynthesisResult bu = buchi(m, inst.targets, mode);
      CHECK(bu.passes.size() <= m.num_reloads() + 1);
      for (const PassStats& p : bu.passes) {
        if (mode.kind == HeuristicKind::Threshold) {
          CHECK(p.filtered_iterations <= reachability_sweep_bound(m.num_states(), p.reloads));
          CHECK(p.iterations - p.filtered_iterations <= reachability_sweep_bound(m.num_states(), p.reloads));
        } else {
          CHECK(p.iterations <= reachability_sweep_bound(m.num_states(), p.reloads));
        }
      }
      SynthesisResult pos = positive_reachability(m, inst.targets, mode);
      for (StateId s = 0; s < m.num_states(); ++s) CHECK(pos.selector.rule(s).size() <= pos.iterations + 1);
      SynthesisResult as = almost_sure_reach(m, inst.targets, mode);
      for (const PassStats& p : as.passes)
        CHECK(p.iterations <= m.num_states() * static_cast<std::size_t>(m.capacity() + 1));
    }
  }
}

TEST_CASE("determinism") {
  for (const Instance& inst : random_corpus(30, 45000)) {
    for (const HeuristicMode& mode : all_modes()) {
      SynthesisResult a = almost_sure_reach(inst.model, inst.targets, mode);
      SynthesisResult b = almost_sure_reach(inst.model, inst.targets, mode);
      CHECK(a.values == b.values);
      CHECK(a.selector == b.selector);
    }
  }
}
