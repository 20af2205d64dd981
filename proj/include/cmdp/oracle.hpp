#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cmdp/level.hpp"
#include "cmdp/model.hpp"

/// Brute-force verification by encoding resource levels into an ordinary MDP
/// and solving qualitative objectives with textbook graph algorithms.
namespace cmdp::oracle {

class ProductTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

using ProductState = std::uint32_t;

/// Membership mask over product states.
using ProductSet = std::vector<bool>;

/// States (s, l) for l in 0..capacity plus one absorbing dead state.
class ExplicitMdp {
 public:
  std::size_t num_states() const { return action_offsets_.size() - 1; }
  std::size_t num_model_states() const { return model_states_; }
  Amount capacity() const { return capacity_; }

  ProductState dead() const { return static_cast<ProductState>(num_states() - 1); }
  ProductState index(StateId s, Amount level) const {
    return static_cast<ProductState>(s * static_cast<std::size_t>(capacity_ + 1) + static_cast<std::size_t>(level));
  }
  StateId model_state(ProductState x) const { return static_cast<StateId>(x / static_cast<std::size_t>(capacity_ + 1)); }
  Amount level(ProductState x) const { return static_cast<Amount>(x % static_cast<std::size_t>(capacity_ + 1)); }

  std::size_t first_action(ProductState x) const { return action_offsets_[x]; }
  std::size_t end_action(ProductState x) const { return action_offsets_[x + 1]; }
  std::size_t num_actions(ProductState x) const { return end_action(x) - first_action(x); }
  std::size_t num_product_actions() const { return owners_.size(); }
  ProductState action_owner(std::size_t action) const { return owners_[action]; }

  /// Successors of a global action index.
  std::vector<ProductState>::const_iterator successors_begin(std::size_t action) const {
    return successors_.begin() + static_cast<std::ptrdiff_t>(edge_offsets_[action]);
  }
  std::vector<ProductState>::const_iterator successors_end(std::size_t action) const {
    return successors_.begin() + static_cast<std::ptrdiff_t>(edge_offsets_[action + 1]);
  }

  /// Product successor of playing `a` in (s, level) when the model moves to
  /// `next`; dead when the action is unaffordable.
  ProductState step(StateId s, Amount level, ActionId a, StateId next) const;

  friend ExplicitMdp encode(const Cmdp& model, std::size_t limit);

 private:
  std::size_t model_states_ = 0;
  Amount capacity_ = 0;
  std::vector<std::size_t> action_offsets_;
  std::vector<ProductState> owners_;
  std::vector<std::size_t> edge_offsets_;
  std::vector<ProductState> successors_;
};

inline constexpr std::size_t kDefaultProductLimit = 1'000'000;

/// Throws ProductTooLarge when |S|·(capacity+1) exceeds `limit`.
ExplicitMdp encode(const Cmdp& model, std::size_t limit = kDefaultProductLimit);

/// Largest set of non-dead states where some action keeps every outcome in
/// the set.
ProductSet sure_safety(const ExplicitMdp& mdp);

/// Backward breadth-first distances to target states over actions that keep
/// every outcome surely safe. kUnreachable when no such path exists.
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();
std::vector<std::size_t> reach_distances(const ExplicitMdp& mdp, const StateSet& targets);

/// Safe states with a positive chance of reaching a target.
ProductSet positive_reach(const ExplicitMdp& mdp, const StateSet& targets);

/// Safe states that reach a target within `steps` steps with positive chance.
ProductSet bounded_positive_reach(const ExplicitMdp& mdp, const StateSet& targets, std::size_t steps);

enum class AlmostSureKind { Reach, Buchi };

/// Safe states from which the objective holds with probability one while
/// staying surely safe.
ProductSet almost_sure(const ExplicitMdp& mdp, const StateSet& targets, AlmostSureKind kind);

/// Maximal end components of the safe part of the product.
std::vector<std::vector<ProductState>> safe_end_components(const ExplicitMdp& mdp);

/// Per model state, the least level l with (s, l) in the set.
LevelVector min_levels(const ExplicitMdp& mdp, const ProductSet& set);

}  // namespace cmdp::oracle
