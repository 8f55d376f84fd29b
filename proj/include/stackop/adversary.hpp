#pragma once

#include <vector>

#include "stackop/game.hpp"

namespace stackop {

/// v_i = -p_i + (1 - p_i) s_i: the min player's expected modified opinions.
std::vector<double> expected_modified_opinions(const OpinionVector& s, const std::vector<double>& p_hat);

/// Gain in expected cost from overwriting node i with +1: ell_i (1 - v_i).
struct DeltaScores {
  std::vector<double> delta;
};

DeltaScores delta_scores(const std::vector<double>& ell, const OpinionVector& s,
                         const std::vector<double>& p_hat);

/// The k largest deltas, ties to the lowest id.
Strategy best_response_topk(const DeltaScores& scores, int k);

/// Adversary best response against a known vector v (entries <= 1). The
/// cost is linear in the overwritten coordinates, so top-k is optimal.
Strategy exact_best_response(const std::vector<double>& ell, const std::vector<double>& v, int k);

/// ell . v with the coordinates in y replaced by +1.
double overwritten_cost(const std::vector<double>& ell, const std::vector<double>& v,
                        const Strategy& y);

}  // namespace stackop
