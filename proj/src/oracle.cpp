#include "cmdp/oracle.hpp"

#include <algorithm>
#include <deque>

namespace cmdp::oracle {
namespace {

/// Predecessor actions of every product state.
std::vector<std::vector<std::size_t>> predecessors(const ExplicitMdp& mdp) {
  std::vector<std::vector<std::size_t>> preds(mdp.num_states());
  for (ProductState x = 0; x < mdp.num_states(); ++x)
    for (std::size_t a = mdp.first_action(x); a < mdp.end_action(x); ++a)
      for (auto it = mdp.successors_begin(a); it != mdp.successors_end(a); ++it) preds[*it].push_back(a);
  return preds;
}

bool stays_in(const ExplicitMdp& mdp, std::size_t a, const ProductSet& set) {
  for (auto it = mdp.successors_begin(a); it != mdp.successors_end(a); ++it)
    if (!set[*it]) return false;
  return true;
}

ProductSet target_states(const ExplicitMdp& mdp, const StateSet& targets) {
  if (targets.size() != mdp.num_model_states()) throw ModelError("target set has wrong length");
  ProductSet set(mdp.num_states(), false);
  for (ProductState x = 0; x < mdp.dead(); ++x) set[x] = targets[mdp.model_state(x)];
  return set;
}

/// States of `domain` that can reach `goal` through actions whose outcomes
/// all lie in `domain`.
ProductSet attract_positive(const ExplicitMdp& mdp, const std::vector<std::vector<std::size_t>>& preds,
                            const ProductSet& domain, const ProductSet& goal) {
  ProductSet reached(mdp.num_states(), false);
  std::deque<ProductState> queue;
  for (ProductState x = 0; x < mdp.num_states(); ++x)
    if (domain[x] && goal[x]) {
      reached[x] = true;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    ProductState x = queue.front();
    queue.pop_front();
    for (std::size_t a : preds[x]) {
      ProductState y = mdp.action_owner(a);
      if (reached[y] || !domain[y] || !stays_in(mdp, a, domain)) continue;
      reached[y] = true;
      queue.push_back(y);
    }
  }
  return reached;
}

/// Greatest fixpoint of positive attraction inside the safe set.
ProductSet almost_sure_reach_set(const ExplicitMdp& mdp, const std::vector<std::vector<std::size_t>>& preds,
                                 const ProductSet& safe, const ProductSet& goal) {
  ProductSet current = safe;
  while (true) {
    ProductSet next = attract_positive(mdp, preds, current, goal);
    if (next == current) return current;
    current = std::move(next);
  }
}

/// Strongly connected components restricted to `alive` states and `enabled`
/// actions. Returns a component id per state (-1 for dead ones).
std::vector<long> strongly_connected(const ExplicitMdp& mdp, const ProductSet& alive,
                                     const std::vector<bool>& enabled) {
  const std::size_t n = mdp.num_states();
  std::vector<long> index(n, -1);
  std::vector<long> low(n, 0);
  std::vector<long> component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<ProductState> stack;
  long counter = 0;
  long components = 0;

  struct Frame {
    ProductState state;
    std::size_t action;
    std::size_t edge;  // offset within the current action's successors
  };

  for (ProductState root = 0; root < n; ++root) {
    if (!alive[root] || index[root] >= 0) continue;
    std::vector<Frame> call{{root, mdp.first_action(root), 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      bool descended = false;
      while (f.action < mdp.end_action(f.state)) {
        if (!enabled[f.action]) {
          ++f.action;
          f.edge = 0;
          continue;
        }
        auto begin = mdp.successors_begin(f.action);
        auto count = static_cast<std::size_t>(mdp.successors_end(f.action) - begin);
        if (f.edge == count) {
          ++f.action;
          f.edge = 0;
          continue;
        }
        ProductState w = *(begin + static_cast<std::ptrdiff_t>(f.edge++));
        if (!alive[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, mdp.first_action(w), 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[f.state] = std::min(low[f.state], index[w]);
      }
      if (descended) continue;

      ProductState v = f.state;
      if (low[v] == index[v]) {
        while (true) {
          ProductState w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components;
          if (w == v) break;
        }
        ++components;
      }
      call.pop_back();
      if (!call.empty()) {
        ProductState parent = call.back().state;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return component;
}

}  // namespace

ProductState ExplicitMdp::step(StateId s, Amount level, ActionId a, StateId next) const {
  ProductState x = index(s, level);
  std::size_t act = first_action(x) + a;
  if (act >= end_action(x)) throw ModelError("action out of range");
  for (auto it = successors_begin(act); it != successors_end(act); ++it) {
    if (*it == dead()) return dead();
    if (model_state(*it) == next) return *it;
  }
  throw ModelError("not a successor");
}

ExplicitMdp encode(const Cmdp& model, std::size_t limit) {
  const std::size_t n = model.num_states();
  const Amount cap = model.capacity();
  const std::size_t levels = static_cast<std::size_t>(cap) + 1;
  if (cap < 0 || n > limit / levels || n * levels > limit)
    throw ProductTooLarge("product of " + std::to_string(n) + " states and capacity " + std::to_string(cap) +
                          " exceeds the limit of " + std::to_string(limit));

  ExplicitMdp mdp;
  mdp.model_states_ = n;
  mdp.capacity_ = cap;
  const ProductState dead = static_cast<ProductState>(n * levels);
  mdp.action_offsets_.push_back(0);
  mdp.edge_offsets_.push_back(0);

  auto close_action = [&](ProductState owner) {
    mdp.owners_.push_back(owner);
    mdp.edge_offsets_.push_back(mdp.successors_.size());
  };

  for (StateId s = 0; s < n; ++s) {
    for (Amount l = 0; l <= cap; ++l) {
      ProductState x = static_cast<ProductState>(s * levels + static_cast<std::size_t>(l));
      for (ActionId a = 0; a < model.num_actions(s); ++a) {
        Amount cost = model.consumption(s, a);
        Amount available = model.is_reload(s) ? cap : l;
        if (cost > available) {
          mdp.successors_.push_back(dead);
        } else {
          Amount after = available - cost;
          for (const Successor& succ : model.successors(s, a))
            mdp.successors_.push_back(static_cast<ProductState>(succ.target * levels + static_cast<std::size_t>(after)));
        }
        close_action(x);
      }
      mdp.action_offsets_.push_back(mdp.owners_.size());
    }
  }
  mdp.successors_.push_back(dead);
  close_action(dead);
  mdp.action_offsets_.push_back(mdp.owners_.size());
  return mdp;
}

ProductSet sure_safety(const ExplicitMdp& mdp) {
  const std::size_t n = mdp.num_states();
  auto preds = predecessors(mdp);
  ProductSet in(n, true);
  in[mdp.dead()] = false;

  // Per action, the number of outcomes outside the set; per state, the number
  // of actions with none.
  std::vector<std::size_t> outside(mdp.num_product_actions(), 0);
  std::vector<std::size_t> usable(n, 0);
  for (ProductState x = 0; x < n; ++x)
    for (std::size_t a = mdp.first_action(x); a < mdp.end_action(x); ++a) {
      for (auto it = mdp.successors_begin(a); it != mdp.successors_end(a); ++it)
        if (!in[*it]) ++outside[a];
      if (outside[a] == 0) ++usable[x];
    }

  std::vector<ProductState> queue;
  for (ProductState x = 0; x < n; ++x)
    if (in[x] && usable[x] == 0) {
      in[x] = false;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    ProductState x = queue.back();
    queue.pop_back();
    for (std::size_t a : preds[x]) {
      if (outside[a]++ != 0) continue;
      ProductState y = mdp.action_owner(a);
      if (--usable[y] == 0 && in[y]) {
        in[y] = false;
        queue.push_back(y);
      }
    }
  }
  return in;
}

std::vector<std::size_t> reach_distances(const ExplicitMdp& mdp, const StateSet& targets) {
  const ProductSet safe = sure_safety(mdp);
  const ProductSet goal = target_states(mdp, targets);
  auto preds = predecessors(mdp);
  std::vector<std::size_t> dist(mdp.num_states(), kUnreachable);
  std::deque<ProductState> queue;
  for (ProductState x = 0; x < mdp.num_states(); ++x)
    if (safe[x] && goal[x]) {
      dist[x] = 0;
      queue.push_back(x);
    }
  while (!queue.empty()) {
    ProductState x = queue.front();
    queue.pop_front();
    for (std::size_t a : preds[x]) {
      ProductState y = mdp.action_owner(a);
      if (dist[y] != kUnreachable || !safe[y] || !stays_in(mdp, a, safe)) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

ProductSet positive_reach(const ExplicitMdp& mdp, const StateSet& targets) {
  return bounded_positive_reach(mdp, targets, kUnreachable - 1);
}

ProductSet bounded_positive_reach(const ExplicitMdp& mdp, const StateSet& targets, std::size_t steps) {
  auto dist = reach_distances(mdp, targets);
  ProductSet set(mdp.num_states(), false);
  for (ProductState x = 0; x < mdp.num_states(); ++x) set[x] = dist[x] <= steps;
  return set;
}

std::vector<std::vector<ProductState>> safe_end_components(const ExplicitMdp& mdp) {
  const std::size_t n = mdp.num_states();
  ProductSet alive = sure_safety(mdp);
  std::vector<bool> enabled(mdp.num_product_actions(), false);
  for (ProductState x = 0; x < n; ++x)
    if (alive[x])
      for (std::size_t a = mdp.first_action(x); a < mdp.end_action(x); ++a) enabled[a] = stays_in(mdp, a, alive);

  std::vector<long> component;
  while (true) {
    component = strongly_connected(mdp, alive, enabled);
    bool changed = false;
    for (ProductState x = 0; x < n; ++x) {
      if (!alive[x]) continue;
      bool any = false;
      for (std::size_t a = mdp.first_action(x); a < mdp.end_action(x); ++a) {
        if (!enabled[a]) continue;
        for (auto it = mdp.successors_begin(a); it != mdp.successors_end(a); ++it)
          if (!alive[*it] || component[*it] != component[x]) {
            enabled[a] = false;
            changed = true;
            break;
          }
        any = any || enabled[a];
      }
      if (!any) {
        alive[x] = false;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<std::vector<ProductState>> groups;
  std::vector<long> slot;
  for (ProductState x = 0; x < n; ++x) {
    if (!alive[x]) continue;
    auto c = static_cast<std::size_t>(component[x]);
    if (c >= slot.size()) slot.resize(c + 1, -1);
    if (slot[c] < 0) {
      slot[c] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[c])].push_back(x);
  }
  return groups;
}

ProductSet almost_sure(const ExplicitMdp& mdp, const StateSet& targets, AlmostSureKind kind) {
  const ProductSet safe = sure_safety(mdp);
  const ProductSet goal = target_states(mdp, targets);
  auto preds = predecessors(mdp);
  if (kind == AlmostSureKind::Reach) return almost_sure_reach_set(mdp, preds, safe, goal);

  ProductSet accepting(mdp.num_states(), false);
  for (const auto& mec : safe_end_components(mdp)) {
    bool visits = std::any_of(mec.begin(), mec.end(), [&](ProductState x) { return goal[x]; });
    if (visits)
      for (ProductState x : mec) accepting[x] = true;
  }
  return almost_sure_reach_set(mdp, preds, safe, accepting);
}

LevelVector min_levels(const ExplicitMdp& mdp, const ProductSet& set) {
  LevelVector out(mdp.num_model_states(), kInfinity);
  for (StateId s = 0; s < mdp.num_model_states(); ++s)
    for (Amount l = 0; l <= mdp.capacity(); ++l)
      if (set[mdp.index(s, l)]) {
        out[s] = Level(l);
        break;
      }
  return out;
}

}  // namespace cmdp::oracle
