// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stackop/absorbing.hpp"
#include "stackop/adversary.hpp"
#include "stackop/ftpl.hpp"
#include "stackop/harness.hpp"
#include "stackop/oracle.hpp"
#include "test_util.hpp"

using namespace stackop;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<GraphInstance> property_graphs() {
  std::vector<GraphInstance> out;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 2 + static_cast<int>((seed * 7) % 49);  // 2..50
    out.push_back(testing::random_instance(n, 1000 + seed, 0.2));
  }
  return out;
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome fixed_point() {
  const auto graphs = property_graphs();
  const auto start = Clock::now();
  double worst = 0;
  for (const auto& gi : graphs) {
    const auto model = solve_absorption(gi.graph);
    const auto z = equilibrium_opinions(model, gi.opinions);
    worst = std::max(worst, sup_diff(z, update_step(gi.graph, gi.opinions.values(), z)));
  }
  const double secs = seconds_since(start);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max residual %.3g, %.3f s", worst, secs);
  return {worst <= 1e-9 && secs < 1.0, buf};
}

Outcome worked_instance() {
  const auto gi = testing::g2();
  const auto model = solve_absorption(gi.graph);
  const double q[2][2] = {{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}};
  double err = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) err = std::max(err, std::abs(model.q_ub(i, j) - q[i][j]));
    err = std::max(err, std::abs(model.ell(i) - 1.0));
  }
  err = std::max(err, sup_diff(equilibrium_opinions(model, gi.opinions), {2.0 / 3, 1.0 / 3}));
  const auto ctl = expressed_control_equilibrium(gi.graph, gi.opinions, {0}, 1.0);
  const double ctl_err = sup_diff(ctl, {1.0, 0.5});
  char buf[128];
  std::snprintf(buf, sizeof buf, "solve err %.3g, control err %.3g", err, ctl_err);
  return {err <= 1e-12 && ctl_err <= 1e-12, buf};
}

Outcome solver_vs_dynamics() {
  double worst = 0;
  for (const auto& gi : property_graphs()) {
    const auto z = equilibrium_opinions(solve_absorption(gi.graph), gi.opinions);
    const auto dyn = iterate_dynamics(gi.graph, gi.opinions, 1e-13);
    worst = std::max(worst, sup_diff(z, dyn.z));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max sup-norm diff %.3g", worst);
  return {worst <= 1e-6, buf};
}

Outcome ftpl_correctness() {
  int ok = 0;
  for (std::uint64_t trial = 1; trial <= 100; ++trial) {
    rng::Stream st(trial, rng::Purpose::Graph, 7, 0);
    const int n = 2 + static_cast<int>(st.below(9));  // 2..10
    const int k = 1 + static_cast<int>(st.below(static_cast<std::uint64_t>(std::min(3, n))));
    const auto inst = testing::random_game(n, k, 500 + trial, 0.4);
    const long horizon = 64;
    FtplState state(inst, horizon, trial);
    const long rounds = static_cast<long>(st.below(30));
    for (long t = 0; t < rounds; ++t) {
      std::vector<NodeIndex> all(n);
      for (int i = 0; i < n; ++i) all[i] = i;
      for (int i = n - 1; i > 0; --i)
        std::swap(all[i], all[st.below(static_cast<std::uint64_t>(i) + 1)]);
      state.record_adversary({all.begin(), all.begin() + k});
    }
    const auto r = draw_perturbation(state);
    if (ftpl_select(state, r) == brute_ftpl_argmin(state, r)) ++ok;
  }
  return {ok == 100, std::to_string(ok) + "/100 exact matches"};
}

Outcome adversary_correctness() {
  int ok = 0;
  for (std::uint64_t trial = 1; trial <= 100; ++trial) {
    rng::Stream st(trial, rng::Purpose::Graph, 8, 0);
    const int n = 2 + static_cast<int>(st.below(11));  // 2..12
    const int k = 1 + static_cast<int>(st.below(static_cast<std::uint64_t>(std::min(4, n))));
    const auto inst = testing::random_game(n, k, 900 + trial, 0.4);
    std::vector<double> p(n);
    for (double& x : p) x = st.uniform01();
    const auto v = expected_modified_opinions(inst.s, p);
    const double got = overwritten_cost(inst.ell, v, exact_best_response(inst.ell, v, k));
    double best = -1e300;
    for_each_subset(n, k, [&](const std::vector<NodeIndex>& y) {
      best = std::max(best, overwritten_cost(inst.ell, v, Strategy(Role::Max, y)));
    });
    if (std::abs(got - best) <= 1e-12 * std::max(1.0, std::abs(best))) ++ok;
  }
  return {ok == 100, std::to_string(ok) + "/100 attain the enumerated maximum"};
}

Outcome estimation() {
  const auto inst = testing::g2_game();
  const long r = 10'000;
  const double tol = std::sqrt(std::log(static_cast<double>(r)) / static_cast<double>(r));
  int ok = 0;
  for (std::uint64_t trial = 1; trial <= 100; ++trial) {
    FtplState state(inst, 4, trial);
    const auto est = estimate_selection_probs(state, r);
    if (std::abs(est.p_hat[0] - 0.75) <= tol) ++ok;
  }
  return {ok >= 95, std::to_string(ok) + "/100 within tolerance"};
}

// Pinned instances for the long-run criteria.
GameInstance pinned_instance(int n, int k, std::uint64_t seed) {
  GraphInstance gi = generate_graph(GraphKind::Random, n, seed, 1.0, OpinionMode::uniform(), 0.3);
  return make_instance(std::move(gi.graph), std::move(gi.opinions), k);
}

Outcome no_regret_trend() {
  const auto inst = pinned_instance(20, 3, 20);
  const std::vector<long> horizons{256, 1024, 4096};
  const auto start = Clock::now();
  std::vector<double> med;
  for (long T : horizons) {
    std::vector<double> avg;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RunConfig c;
      c.k = 3;
      c.horizon = T;
      c.seed = seed;
      avg.push_back(run_stackelberg(inst, c).regret_curve.back() / static_cast<double>(T));
    }
    med.push_back(median(avg));
  }
  const double secs = seconds_since(start);

  bool decreasing = true;
  for (std::size_t i = 1; i < med.size(); ++i) decreasing = decreasing && med[i] < med[i - 1];
  // Least-squares slope of log(avg regret) on log(T); undefined for non-positive medians.
  double slope = NAN;
  if (std::all_of(med.begin(), med.end(), [](double m) { return m > 0; })) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(med.size());
    for (std::size_t i = 0; i < med.size(); ++i) {
      const double x = std::log(static_cast<double>(horizons[i])), y = std::log(med[i]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  char buf[192];
  std::snprintf(buf, sizeof buf, "median avg regret %.4g, %.4g, %.4g; slope %.3f; %.1f s", med[0], med[1],
                med[2], slope, secs);
  return {decreasing && slope <= -0.3 && secs <= 300.0, buf};
}

Outcome equilibrium_gap_shrinks() {
  const auto inst = pinned_instance(8, 2, 8);
  const auto start = Clock::now();
  const auto mm = brute_minmax(inst);
  const double oracle_secs = seconds_since(start);
  std::vector<double> med, signed_med;
  for (long T : {100L, 400L, 1600L}) {
    std::vector<double> gaps, raw;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      RunConfig c;
      c.k = 2;
      c.horizon = T;
      c.seed = seed;
      const RunReport rep = run_stackelberg(inst, c);
      const GapResult g = equilibrium_gap(rep.avg_p, inst, mm.minmax_value);
      gaps.push_back(g.gap_plus);
      raw.push_back(g.gap);
    }
    med.push_back(median(gaps));
    signed_med.push_back(median(raw));
  }
  // The averaged strategy is mixed, so the signed gap is often negative and
  // gap+ is then zero; the signed medians are printed alongside.
  char buf[256];
  std::snprintf(buf, sizeof buf, "median gap+ %.4g, %.4g, %.4g (signed %.4g, %.4g, %.4g); minmax %.6g in %.3f s",
                med[0], med[1], med[2], signed_med[0], signed_med[1], signed_med[2], mm.minmax_value,
                oracle_secs);
  return {med[2] <= 0.5 * med[0] && oracle_secs < 10.0, buf};
}

Outcome oracle_sanity() {
  const auto g2 = brute_minmax(testing::g2_game());
  bool ok = std::abs(g2.minmax_value - 1.0) <= 1e-12 && g2.argmin_x.subset() == std::vector<NodeIndex>{0} &&
            std::abs(g2.maxmin_value) <= 1e-12;
  int dual = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 2 + static_cast<int>(seed % 8);
    const int k = 1 + static_cast<int>(seed % 3) % n;
    const auto res = brute_minmax(testing::random_game(n, std::min(k, n), 3000 + seed, 0.4));
    if (res.maxmin_value <= res.minmax_value + 1e-12) ++dual;
  }
  return {ok && dual == 50, std::string("G2 ") + (ok ? "ok" : "wrong") + ", weak duality " +
                                std::to_string(dual) + "/50"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "stackop_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = STACKOP_CLI_PATH;
  const std::string graph = (dir / "g.txt").string();
  auto sh = [](const std::string& cmd) {
    const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  bool ok = sh(cli + " gen --kind random --n 12 --p 0.4 --seed 11 --out " + graph) == 0;
  const char* threads[] = {"1", "1", "4"};
  std::vector<std::string> csv, json;
  for (int i = 0; i < 3 && ok; ++i) {
    const fs::path out = dir / ("run" + std::to_string(i));
    ok = sh(cli + " play --graph " + graph + " --k 3 --T 200 --seed 42 --gap --threads " + threads[i] +
            " --out " + out.string()) == 0;
    csv.push_back(slurp(out / "rounds.csv"));
    json.push_back(slurp(out / "report.json"));
  }
  ok = ok && csv.size() == 3 && !csv[0].empty() && !json[0].empty() && csv[0] == csv[1] &&
       csv[0] == csv[2] && json[0] == json[1] && json[0] == json[2];
  fs::remove_all(dir);
  return {ok, ok ? "rounds.csv and report.json identical across 3 runs (threads 1,1,4)" : "outputs differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fixed-point equilibrium residual", fixed_point},
      {"worked two-node instance", worked_instance},
      {"direct solve vs dynamics", solver_vs_dynamics},
      {"FTPL selection vs brute argmin", ftpl_correctness},
      {"adversary exact best response", adversary_correctness},
      {"selection probability estimation", estimation},
      {"no-regret trend", no_regret_trend},
      {"approximate-equilibrium gap", equilibrium_gap_shrinks},
      {"oracle sanity", oracle_sanity},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
