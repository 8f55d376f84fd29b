#include "stackop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "stackop/adversary.hpp"
#include "stackop/errors.hpp"
#include "stackop/oracle.hpp"
#include "stackop/rng.hpp"

namespace stackop {

bool exceeds_sampling_budget(const RunConfig& config) {
  return static_cast<double>(config.horizon) * static_cast<double>(config.effective_samples()) >
         kSamplingWarnThreshold;
}

namespace {

// g(E[x], y) with the expected modified opinions v and adversary subset N.
double expected_cost(const std::vector<double>& ell, const std::vector<double>& v,
                     const std::vector<NodeIndex>& adversary) {
  std::vector<char> in_n(v.size(), 0);
  for (NodeIndex i : adversary) in_n[i] = 1;
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) total += ell[i] * (in_n[i] ? 1.0 : v[i]);
  return total;
}

}  // namespace

RunReport run_stackelberg(const GameInstance& inst, const RunConfig& config) {
  if (config.horizon < 1) throw Error(ErrorKind::InvalidParam, "T must be >= 1");
  if (config.samples < 0) throw Error(ErrorKind::InvalidParam, "r must be >= 1");
  if (config.k != inst.k) throw Error(ErrorKind::InvalidParam, "config k differs from instance k");
  if (config.compute_gap) check_enumeration(inst.n(), inst.k);

  const int n = inst.n();
  const long r = config.effective_samples();
  RunReport report;
  report.config = config;
  report.s = inst.s.values();
  report.ell = inst.ell;
  report.avg_p.assign(static_cast<std::size_t>(n), 0.0);

  FtplState state(inst, config.horizon, config.seed);
  for (long t = 1; t <= config.horizon; ++t) {
    RoundRecord rec;
    rec.t = t;
    rec.p_hat = estimate_selection_probs(state, r, config.threads);
    const Strategy y = best_response_topk(delta_scores(inst.ell, inst.s, rec.p_hat.p_hat), inst.k);
    const Strategy x = ftpl_select(state, draw_perturbation(state));
    rec.x = x.subset();
    rec.y = y.subset();
    rec.realized_loss = loss_f(inst, rec.y, x);
    rec.expected_loss_estimate =
        expected_cost(inst.ell, expected_modified_opinions(inst.s, rec.p_hat.p_hat), rec.y);
    for (int i = 0; i < n; ++i) report.avg_p[i] += rec.p_hat.p_hat[i];
    state.record_adversary(rec.y);
    report.rounds.push_back(std::move(rec));
  }
  for (double& p : report.avg_p) p /= static_cast<double>(config.horizon);

  rng::Stream pick(config.seed, rng::Purpose::RoundPick, 0, 0);
  report.t_min = static_cast<long>(pick.below(static_cast<std::uint64_t>(config.horizon))) + 1;
  report.output_strategy = Strategy(Role::Min, report.rounds[report.t_min - 1].x);

  report.regret_curve = compute_regret(report.rounds, inst);
  if (config.compute_gap) report.gap = equilibrium_gap(report.avg_p, inst);
  return report;
}

RunReport run_stackelberg(const RunConfig& config) {
  GraphInstance gi = load_graph_file(config.graph_path);
  const GameInstance inst = make_instance(std::move(gi.graph), std::move(gi.opinions), config.k);
  return run_stackelberg(inst, config);
}

std::vector<double> compute_regret(const std::vector<PlayedRound>& rounds,
                                   const std::vector<double>& ell, const std::vector<double>& s,
                                   int k, OfflineMethod method) {
  const int n = static_cast<int>(ell.size());
  if (rounds.empty()) throw Error(ErrorKind::InvalidParam, "no rounds to score");
  if (static_cast<int>(s.size()) != n) throw Error(ErrorKind::DimensionMismatch, "ell vs s");
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidParam, "k outside 1..n");

  if (method == OfflineMethod::Auto) {
    method = n <= kDefaultOracleLimits.max_nodes && binomial(n, k) <= kRegretEnumerationLimit
                 ? OfflineMethod::Enumerate
                 : OfflineMethod::Counts;
  }

  std::vector<double> gain(n);
  for (int i = 0; i < n; ++i) gain[i] = ell[i] * (1.0 + s[i]);

  std::vector<std::vector<NodeIndex>> subsets;
  std::vector<double> subset_totals;
  if (method == OfflineMethod::Enumerate) {
    subsets = enumerate_subsets(n, k);
    subset_totals.assign(subsets.size(), 0.0);
  }

  std::vector<long> counts(n, 0);
  std::vector<char> in_n(n);
  double played_total = 0;
  double base_total = 0;
  std::vector<double> curve;
  curve.reserve(rounds.size());
  std::vector<double> scored(n);

  for (const PlayedRound& round : rounds) {
    std::fill(in_n.begin(), in_n.end(), 0);
    for (NodeIndex i : round.adversary) {
      if (i < 0 || i >= n) throw Error(ErrorKind::IndexOutOfRange, "adversary id outside the graph");
      in_n[i] = 1;
    }
    // Loss of x against N: base(N) minus the gains of x's nodes outside N.
    double base = 0;
    for (int i = 0; i < n; ++i) base += in_n[i] ? ell[i] : ell[i] * s[i];

    double played = base;
    for (NodeIndex i : round.x) {
      if (i < 0 || i >= n) throw Error(ErrorKind::IndexOutOfRange, "x id outside the graph");
      if (!in_n[i]) played -= gain[i];
    }
    played_total += played;
    base_total += base;

    double offline = 0;
    if (method == OfflineMethod::Enumerate) {
      offline = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < subsets.size(); ++j) {
        double loss = base;
        for (NodeIndex i : subsets[j])
          if (!in_n[i]) loss -= gain[i];
        subset_totals[j] += loss;
        offline = std::min(offline, subset_totals[j]);
      }
    } else {
      for (int i = 0; i < n; ++i) {
        if (!in_n[i]) ++counts[i];
        scored[i] = static_cast<double>(counts[i]) * gain[i];
      }
      std::vector<double> top = scored;
      std::partial_sort(top.begin(), top.begin() + k, top.end(), std::greater<>());
      offline = base_total;
      for (int j = 0; j < k; ++j) offline -= top[j];
    }
    curve.push_back(played_total - offline);
  }
  return curve;
}

std::vector<double> compute_regret(const std::vector<RoundRecord>& records, const GameInstance& inst,
                                   OfflineMethod method) {
  std::vector<PlayedRound> rounds;
  rounds.reserve(records.size());
  for (const RoundRecord& rec : records) rounds.push_back({rec.x, rec.y});
  return compute_regret(rounds, inst.ell, inst.s.values(), inst.k, method);
}

GapResult equilibrium_gap(const std::vector<double>& avg_p, const GameInstance& inst,
                          double minmax_value) {
  const std::vector<double> v = expected_modified_opinions(inst.s, avg_p);
  const Strategy y = exact_best_response(inst.ell, v, inst.k);
  GapResult res;
  res.minmax_value = minmax_value;
  res.best_response_value = overwritten_cost(inst.ell, v, y);
  res.gap = res.best_response_value - minmax_value;
  res.gap_plus = std::max(res.gap, 0.0);
  return res;
}

GapResult equilibrium_gap(const std::vector<double>& avg_p, const GameInstance& inst) {
  return equilibrium_gap(avg_p, inst, brute_minmax(inst).minmax_value);
}

}  // namespace stackop
