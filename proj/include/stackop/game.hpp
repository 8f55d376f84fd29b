#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackop/absorbing.hpp"
#include "stackop/graph.hpp"

namespace stackop {

enum class Role { Min, Max };

/// A k-subset of nodes chosen by one player. The min player resets the
/// chosen internal opinions to -1; the max player (moving second) resets
/// them to +1, overwriting the min player where they overlap.
class Strategy {
 public:
  Strategy() = default;
  /// Sorts the ids; throws InvalidParam on duplicates or negative ids.
  Strategy(Role role, std::vector<NodeIndex> subset);

  Role role() const noexcept { return role_; }
  const std::vector<NodeIndex>& subset() const noexcept { return subset_; }
  int size() const noexcept { return static_cast<int>(subset_.size()); }
  bool contains(NodeIndex i) const;

  friend bool operator==(const Strategy&, const Strategy&) = default;

 private:
  Role role_ = Role::Min;
  std::vector<NodeIndex> subset_;
};

/// "3;7;9" with 1-based ids, ascending. Empty subset gives "".
std::string format_subset(const std::vector<NodeIndex>& subset);
std::vector<NodeIndex> parse_subset(std::string_view text);

/// Graph, internal opinions, the solved absorption model and the budget k
/// shared by both players.
struct GameInstance {
  WeightedGraph graph;
  OpinionVector s;
  AbsorptionModel model;
  std::vector<double> ell;
  int k = 0;

  int n() const noexcept { return graph.size(); }
};

/// Solves the absorption model; throws InvalidParam unless 1 <= k <= n.
GameInstance make_instance(WeightedGraph graph, OpinionVector s, int k);

/// Final internal opinions: +1 on y, else -1 on x, else s.
std::vector<double> apply_strategies(const OpinionVector& s, const Strategy& x,
                                     const std::optional<Strategy>& y);

/// g(x, y) = ell . (s' + y).
double cost_g(const GameInstance& inst, const Strategy& x, const std::optional<Strategy>& y);

/// Per-round loss of x once the adversary's subset N is fixed. Identical to
/// cost_g(inst, x, y(N)) but written in the affine form used by the learner.
double loss_f(const GameInstance& inst, const std::vector<NodeIndex>& adversary,
              const Strategy& x);

/// w_ii (z_i - s_i)^2 + sum_j w_ij (z_i - z_j)^2.
double individual_cost(const WeightedGraph& g, const std::vector<double>& z,
                       const OpinionVector& s, NodeIndex i);

double social_cost(const std::vector<double>& z);

}  // namespace stackop
