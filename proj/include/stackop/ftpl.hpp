#pragma once

#include <cstdint>
#include <vector>

#include "stackop/game.hpp"
#include "stackop/rng.hpp"

namespace stackop {

/// Follow-the-perturbed-leader state for the min player over a fixed
/// horizon T. `counts()[i]` is the number of past rounds in which node i was
/// outside the adversary's subset; the cumulative loss of any x depends on
/// the history only through these counts.
///
/// The state keeps a reference to the instance, which must outlive it.
class FtplState {
 public:
  FtplState(const GameInstance& inst, long horizon, std::uint64_t seed);

  const GameInstance& instance() const noexcept { return *inst_; }
  long horizon() const noexcept { return horizon_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// 1-based index of the round about to be played.
  long round() const noexcept { return static_cast<long>(history_.size()) + 1; }
  const std::vector<std::vector<NodeIndex>>& history() const noexcept { return history_; }
  const std::vector<long>& counts() const noexcept { return counts_; }

  /// Appends the adversary subset N^(t) of the round just played.
  void record_adversary(std::vector<NodeIndex> subset);

 private:
  const GameInstance* inst_;
  long horizon_;
  std::uint64_t seed_;
  std::vector<std::vector<NodeIndex>> history_;
  std::vector<long> counts_;
};

/// R ~ U[0, sqrt(T)]^n from the substream (seed, purpose, round, index).
std::vector<double> draw_perturbation(const FtplState& state, std::uint64_t index = 0,
                                      rng::Purpose purpose = rng::Purpose::Perturbation);

/// argmin_x of cumulative loss plus R.x: the k nodes with the largest
/// (ell_i c_i + R_i)(1 + s_i), ties to the lowest id.
Strategy ftpl_select(const FtplState& state, const std::vector<double>& perturbation);

struct ProbabilityEstimate {
  std::vector<double> p_hat;
  long samples = 0;
};

/// Empirical selection frequencies of ftpl_select over r fresh perturbations
/// drawn from the Sampling substreams 1..r of the current round. The result
/// does not depend on `threads`.
ProbabilityEstimate estimate_selection_probs(const FtplState& state, long r, int threads = 1);

}  // namespace stackop
