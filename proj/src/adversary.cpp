#include "stackop/adversary.hpp"

#include <algorithm>
#include <numeric>

#include "stackop/errors.hpp"

namespace stackop {

namespace {

std::vector<NodeIndex> largest_k(const std::vector<double>& score, int k) {
  const int n = static_cast<int>(score.size());
  if (k < 0 || k > n) {
    throw Error(ErrorKind::InvalidParam, "k must lie in 0.." + std::to_string(n));
  }
  std::vector<NodeIndex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](NodeIndex a, NodeIndex b) {
    return score[a] != score[b] ? score[a] > score[b] : a < b;
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

}  // namespace

std::vector<double> expected_modified_opinions(const OpinionVector& s,
                                               const std::vector<double>& p_hat) {
  if (static_cast<int>(p_hat.size()) != s.size()) {
    throw Error(ErrorKind::DimensionMismatch, "p_hat length differs from node count");
  }
  std::vector<double> v(p_hat.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double p = p_hat[i];
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidParam, "p_hat outside [0, 1]");
    v[i] = p * -1.0 + (1.0 - p) * s[i];
  }
  return v;
}

DeltaScores delta_scores(const std::vector<double>& ell, const OpinionVector& s,
                         const std::vector<double>& p_hat) {
  if (ell.size() != p_hat.size()) throw Error(ErrorKind::DimensionMismatch, "ell vs p_hat");
  const std::vector<double> v = expected_modified_opinions(s, p_hat);
  DeltaScores out{std::vector<double>(v.size())};
  for (std::size_t i = 0; i < v.size(); ++i) out.delta[i] = ell[i] * 1.0 - ell[i] * v[i];
  return out;
}

Strategy best_response_topk(const DeltaScores& scores, int k) {
  return Strategy(Role::Max, largest_k(scores.delta, k));
}

Strategy exact_best_response(const std::vector<double>& ell, const std::vector<double>& v, int k) {
  if (ell.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "ell vs v");
  std::vector<double> gain(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 1.0) throw Error(ErrorKind::InvalidParam, "v entries must be <= 1");
    gain[i] = ell[i] * (1.0 - v[i]);
  }
  return Strategy(Role::Max, largest_k(gain, k));
}

double overwritten_cost(const std::vector<double>& ell, const std::vector<double>& v,
                        const Strategy& y) {
  if (ell.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "ell vs v");
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    total += ell[i] * (y.contains(static_cast<NodeIndex>(i)) ? 1.0 : v[i]);
  }
  return total;
}

}  // namespace stackop
