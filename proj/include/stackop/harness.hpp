#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stackop/ftpl.hpp"
#include "stackop/game.hpp"

namespace stackop {

inline constexpr std::string_view kVersion = "stackop 1.0.0";

/// Above this many sample selections per run (T * r) the CLI prints a warning.
inline constexpr double kSamplingWarnThreshold = 1e8;

struct RunConfig {
  std::string graph_path;  // echoed into reports only
  int k = 1;
  long horizon = 1;        // T
  long samples = 0;        // r; 0 means r = T
  std::uint64_t seed = 0;
  bool compute_gap = false;
  int threads = 1;         // never affects results, so it is not echoed

  long effective_samples() const noexcept { return samples > 0 ? samples : horizon; }
};

bool exceeds_sampling_budget(const RunConfig& config);

struct RoundRecord {
  long t = 0;
  std::vector<NodeIndex> x;  // min player's realized subset
  std::vector<NodeIndex> y;  // adversary subset N^(t)
  ProbabilityEstimate p_hat;
  double realized_loss = 0;
  double expected_loss_estimate = 0;
};

struct GapResult {
  double minmax_value = 0;
  double best_response_value = 0;  // max_y g(E[x], y) for the averaged strategy
  double gap = 0;
  double gap_plus = 0;
};

struct RunReport {
  RunConfig config;
  std::vector<double> s;
  std::vector<double> ell;
  std::vector<RoundRecord> rounds;
  long t_min = 0;
  Strategy output_strategy;
  std::vector<double> avg_p;
  std::vector<double> regret_curve;
  std::optional<GapResult> gap;
};

/// Plays all T rounds. In round t the selection probabilities of the current
/// FTPL distribution are estimated from r samples, the adversary answers with
/// the top-k delta scores, and the min player realizes one FTPL draw. T_min is
/// drawn afterwards and the output strategy is x^(T_min).
RunReport run_stackelberg(const GameInstance& inst, const RunConfig& config);

/// Loads config.graph_path and builds the instance first.
RunReport run_stackelberg(const RunConfig& config);

enum class OfflineMethod {
  Auto,       // Enumerate when within the oracle node limit and
              // C(n, k) <= kRegretEnumerationLimit, else Counts
  Enumerate,  // running totals for every k-subset
  Counts,     // top-k of ell_i c_i (1 + s_i)
};

inline constexpr std::uint64_t kRegretEnumerationLimit = 20'000;

struct PlayedRound {
  std::vector<NodeIndex> x;
  std::vector<NodeIndex> adversary;
};

/// Cumulative regret after each round against the best fixed k-subset in
/// hindsight over the same prefix.
std::vector<double> compute_regret(const std::vector<PlayedRound>& rounds,
                                   const std::vector<double>& ell, const std::vector<double>& s,
                                   int k, OfflineMethod method = OfflineMethod::Auto);

std::vector<double> compute_regret(const std::vector<RoundRecord>& records, const GameInstance& inst,
                                   OfflineMethod method = OfflineMethod::Auto);

/// Adversary best-response value against the averaged strategy avg_p, minus
/// the pure minmax value.
GapResult equilibrium_gap(const std::vector<double>& avg_p, const GameInstance& inst,
                          double minmax_value);
GapResult equilibrium_gap(const std::vector<double>& avg_p, const GameInstance& inst);

enum class ReportFormat { Csv, Json };

std::string rounds_csv(const RunReport& report);
std::string report_json(const RunReport& report);

/// Writes rounds.csv and/or report.json into dir (created if missing).
std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::vector<ReportFormat>& formats,
                                               const std::filesystem::path& dir);

/// Rebuilds a report (without p_hat details beyond what was stored) from
/// report.json; used by the `regret` subcommand.
RunReport read_report_json(std::string_view text);

/// %.12g
std::string format_real(double v);

}  // namespace stackop
