#include "stackop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stackop/adversary.hpp"
#include "stackop/errors.hpp"

namespace stackop {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  // result * (n - k + i) / i stays integral at every step.
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

void check_enumeration(int n, int k, const OracleLimits& limits) {
  if (n < 0 || k < 0 || k > n) {
    throw Error(ErrorKind::InvalidParam, "need 0 <= k <= n, got n=" + std::to_string(n) +
                                             " k=" + std::to_string(k));
  }
  if (n > limits.max_nodes) {
    throw Error(ErrorKind::TooLarge, "n=" + std::to_string(n) + " exceeds the enumeration limit of " +
                                         std::to_string(limits.max_nodes) + " nodes");
  }
  const std::uint64_t count = binomial(n, k);
  if (count > limits.max_subsets) {
    throw Error(ErrorKind::TooLarge, "C(" + std::to_string(n) + "," + std::to_string(k) +
                                         ") exceeds the enumeration limit of " +
                                         std::to_string(limits.max_subsets));
  }
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<NodeIndex>&)>& visit,
                     const OracleLimits& limits) {
  check_enumeration(n, k, limits);
  std::vector<NodeIndex> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    visit(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) return;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

std::vector<std::vector<NodeIndex>> enumerate_subsets(int n, int k, const OracleLimits& limits) {
  std::vector<std::vector<NodeIndex>> out;
  check_enumeration(n, k, limits);
  out.reserve(binomial(n, k));
  for_each_subset(n, k, [&](const std::vector<NodeIndex>& s) { out.push_back(s); }, limits);
  return out;
}

MinmaxResult brute_minmax(const GameInstance& inst, const OracleLimits& limits) {
  const int n = inst.n();
  const int k = inst.k;
  check_enumeration(n, k, limits);
  MinmaxResult res;

  // min over x of the adversary's exact best response.
  res.minmax_value = std::numeric_limits<double>::infinity();
  for_each_subset(n, k, [&](const std::vector<NodeIndex>& xs) {
    const Strategy x(Role::Min, xs);
    const std::vector<double> v = apply_strategies(inst.s, x, std::nullopt);
    const Strategy y = exact_best_response(inst.ell, v, k);
    const double worst = overwritten_cost(inst.ell, v, y);
    res.per_x_table.push_back({xs, worst});
    if (worst < res.minmax_value) {
      res.minmax_value = worst;
      res.argmin_x = x;
    }
  }, limits);

  // max over y of the min player's best response: selections inside N are
  // overwritten, so she takes the k largest ell_i (1 + s_i) outside N.
  res.maxmin_value = -std::numeric_limits<double>::infinity();
  std::vector<double> gains;
  for_each_subset(n, k, [&](const std::vector<NodeIndex>& ys) {
    double base = 0;
    gains.clear();
    std::size_t next = 0;
    for (int i = 0; i < n; ++i) {
      if (next < ys.size() && ys[next] == i) {
        base += inst.ell[i];
        ++next;
      } else {
        base += inst.ell[i] * inst.s[i];
        gains.push_back(inst.ell[i] * (1.0 + inst.s[i]));
      }
    }
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), gains.size());
    std::partial_sort(gains.begin(), gains.begin() + static_cast<std::ptrdiff_t>(take), gains.end(),
                      std::greater<>());
    double value = base;
    for (std::size_t j = 0; j < take; ++j) value -= gains[j];
    if (value > res.maxmin_value) {
      res.maxmin_value = value;
      res.argmax_y = Strategy(Role::Max, ys);
    }
  }, limits);

  const std::uint64_t count = binomial(n, k);
  if (count <= limits.max_double_enumeration / std::max<std::uint64_t>(count, 1)) {
    const auto all = enumerate_subsets(n, k, limits);
    double check = -std::numeric_limits<double>::infinity();
    for (const auto& ys : all) {
      const Strategy y(Role::Max, ys);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& xs : all) best = std::min(best, cost_g(inst, Strategy(Role::Min, xs), y));
      check = std::max(check, best);
    }
    if (std::abs(check - res.maxmin_value) > 1e-9 * std::max(1.0, std::abs(check))) {
      throw std::logic_error("maxmin routes disagree: " + std::to_string(check) + " vs " +
                             std::to_string(res.maxmin_value));
    }
    res.double_enumeration_checked = true;
  }
  if (res.maxmin_value > res.minmax_value + 1e-9) {
    throw std::logic_error("weak duality violated: maxmin exceeds minmax");
  }
  return res;
}

Strategy brute_ftpl_argmin(const FtplState& state, const std::vector<double>& perturbation,
                           const OracleLimits& limits) {
  const GameInstance& inst = state.instance();
  const int n = inst.n();
  if (static_cast<int>(perturbation.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "perturbation length differs from node count");
  }
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<NodeIndex> best;
  for_each_subset(n, inst.k, [&](const std::vector<NodeIndex>& xs) {
    const Strategy x(Role::Min, xs);
    double total = 0;
    for (const auto& adversary : state.history()) total += loss_f(inst, adversary, x);
    for (NodeIndex i : xs) total += perturbation[i] * (-1.0 - inst.s[i]);
    if (total < best_value) {
      best_value = total;
      best = xs;
    }
  }, limits);
  return Strategy(Role::Min, best);
}

}  // namespace stackop
