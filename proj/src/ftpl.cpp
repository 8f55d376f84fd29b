#include "stackop/ftpl.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "stackop/errors.hpp"

namespace stackop {

namespace {

// Coefficients of the variable part of the perturbed cumulative loss. The
// score of node i is (base[i] + R_i) * gain[i].
struct SelectionWeights {
  std::vector<double> base;  // ell_i * c_i
  std::vector<double> gain;  // 1 + s_i
  double scale;              // sqrt(T)
  int k;
};

SelectionWeights selection_weights(const FtplState& state) {
  const GameInstance& inst = state.instance();
  const int n = inst.n();
  SelectionWeights w{std::vector<double>(n), std::vector<double>(n),
                     std::sqrt(static_cast<double>(state.horizon())), inst.k};
  for (int i = 0; i < n; ++i) {
    w.base[i] = inst.ell[i] * static_cast<double>(state.counts()[i]);
    w.gain[i] = 1.0 + inst.s[i];
  }
  return w;
}

// Writes the k best indices (score descending, id ascending) into `top`.
void top_k(const double* score, int n, int k, int* top) {
  int filled = 0;
  for (int i = 0; i < n; ++i) {
    const double v = score[i];
    if (filled == k) {
      // i is larger than every id already held, so it only enters on a strict win.
      if (!(v > score[top[k - 1]])) continue;
      --filled;
    }
    int pos = filled++;
    while (pos > 0 && v > score[top[pos - 1]]) {
      top[pos] = top[pos - 1];
      --pos;
    }
    top[pos] = i;
  }
}

void sample_counts(const SelectionWeights& w, std::uint64_t seed, long round, long first,
                   long last, std::vector<long>& counts) {
  const int n = static_cast<int>(w.base.size());
  std::vector<double> score(n);
  std::vector<int> top(w.k);
  for (long idx = first; idx <= last; ++idx) {
    rng::Stream stream(seed, rng::Purpose::Sampling, static_cast<std::uint64_t>(round),
                       static_cast<std::uint64_t>(idx));
    for (int i = 0; i < n; ++i) {
      const double r = w.scale * stream.uniform01();
      score[i] = (w.base[i] + r) * w.gain[i];
    }
    top_k(score.data(), n, w.k, top.data());
    for (int j = 0; j < w.k; ++j) ++counts[top[j]];
  }
}

}  // namespace

FtplState::FtplState(const GameInstance& inst, long horizon, std::uint64_t seed)
    : inst_(&inst), horizon_(horizon), seed_(seed), counts_(static_cast<std::size_t>(inst.n()), 0) {
  if (horizon < 1) throw Error(ErrorKind::InvalidParam, "horizon T must be >= 1");
}

void FtplState::record_adversary(std::vector<NodeIndex> subset) {
  const int n = inst_->n();
  std::sort(subset.begin(), subset.end());
  if (static_cast<int>(subset.size()) != inst_->k ||
      std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
    throw Error(ErrorKind::InvalidParam, "adversary subset must hold k distinct ids");
  }
  std::vector<char> in_n(static_cast<std::size_t>(n), 0);
  for (NodeIndex i : subset) {
    if (i < 0 || i >= n) throw Error(ErrorKind::IndexOutOfRange, "adversary id outside the graph");
    in_n[i] = 1;
  }
  for (int i = 0; i < n; ++i)
    if (!in_n[i]) ++counts_[i];
  history_.push_back(std::move(subset));
}

std::vector<double> draw_perturbation(const FtplState& state, std::uint64_t index,
                                      rng::Purpose purpose) {
  const int n = state.instance().n();
  const double scale = std::sqrt(static_cast<double>(state.horizon()));
  rng::Stream stream(state.seed(), purpose, static_cast<std::uint64_t>(state.round()), index);
  std::vector<double> r(static_cast<std::size_t>(n));
  for (double& v : r) v = scale * stream.uniform01();
  return r;
}

Strategy ftpl_select(const FtplState& state, const std::vector<double>& perturbation) {
  const SelectionWeights w = selection_weights(state);
  const int n = static_cast<int>(w.base.size());
  if (static_cast<int>(perturbation.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "perturbation length differs from node count");
  }
  std::vector<double> score(n);
  for (int i = 0; i < n; ++i) score[i] = (w.base[i] + perturbation[i]) * w.gain[i];
  std::vector<int> top(w.k);
  top_k(score.data(), n, w.k, top.data());
  return Strategy(Role::Min, std::vector<NodeIndex>(top.begin(), top.end()));
}

ProbabilityEstimate estimate_selection_probs(const FtplState& state, long r, int threads) {
  if (r < 1) throw Error(ErrorKind::InvalidParam, "sample count r must be >= 1");
  const SelectionWeights w = selection_weights(state);
  const int n = static_cast<int>(w.base.size());
  const long workers = std::clamp<long>(threads, 1, r);

  std::vector<std::vector<long>> partial(static_cast<std::size_t>(workers), std::vector<long>(n, 0));
  if (workers == 1) {
    sample_counts(w, state.seed(), state.round(), 1, r, partial[0]);
  } else {
    std::vector<std::jthread> pool;
    const long chunk = (r + workers - 1) / workers;
    for (long t = 0; t < workers; ++t) {
      const long first = 1 + t * chunk;
      const long last = std::min(r, first + chunk - 1);
      if (first > last) break;
      pool.emplace_back([&, t, first, last] {
        sample_counts(w, state.seed(), state.round(), first, last, partial[t]);
      });
    }
  }

  ProbabilityEstimate est{std::vector<double>(n, 0.0), r};
  for (int i = 0; i < n; ++i) {
    long c = 0;
    for (const auto& part : partial) c += part[i];
    est.p_hat[i] = static_cast<double>(c) / static_cast<double>(r);
  }
  return est;
}

}  // namespace stackop
