#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stackop/ftpl.hpp"
#include "stackop/game.hpp"

namespace stackop {

struct OracleLimits {
  /// Largest node count any enumeration accepts.
  int max_nodes = 22;
  /// Largest C(n, k) any enumeration will visit.
  std::uint64_t max_subsets = 10'000'000;
  /// brute_minmax re-derives maxmin by full double enumeration when
  /// C(n, k)^2 stays within this bound.
  std::uint64_t max_double_enumeration = 1'000'000;
};

inline constexpr OracleLimits kDefaultOracleLimits{};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// Throws TooLarge when n or C(n, k) exceeds the limits, InvalidParam when k is
/// outside 0..n.
void check_enumeration(int n, int k, const OracleLimits& limits = kDefaultOracleLimits);

/// Visits every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<NodeIndex>&)>& visit,
                     const OracleLimits& limits = kDefaultOracleLimits);

std::vector<std::vector<NodeIndex>> enumerate_subsets(int n, int k,
                                                      const OracleLimits& limits = kDefaultOracleLimits);

struct MinmaxRow {
  std::vector<NodeIndex> x;
  double worst_case;  // max_y g(x, y)
};

struct MinmaxResult {
  double minmax_value = 0;
  Strategy argmin_x;
  std::vector<MinmaxRow> per_x_table;  // lexicographic order of x
  double maxmin_value = 0;
  Strategy argmax_y;
  bool double_enumeration_checked = false;
};

/// Pure-strategy minmax and maxmin of the game by enumeration. Ties go to
/// the lexicographically smallest subset. Throws std::logic_error if the
/// two maxmin routes disagree or weak duality is violated.
MinmaxResult brute_minmax(const GameInstance& inst, const OracleLimits& limits = kDefaultOracleLimits);

/// Exhaustive argmin over k-subsets of sum_tau loss_f(N^tau, x) + R . x,
/// where x is the delta vector (-1 - s_i on selected nodes).
Strategy brute_ftpl_argmin(const FtplState& state, const std::vector<double>& perturbation,
                           const OracleLimits& limits = kDefaultOracleLimits);

}  // namespace stackop
