// Command line front end: solve, play, oracle, regret, gen.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 validation error,
// 3 enumeration guard exceeded.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stackop/absorbing.hpp"
#include "stackop/errors.hpp"
#include "stackop/graph.hpp"
#include "stackop/harness.hpp"
#include "stackop/oracle.hpp"

namespace {

using namespace stackop;

constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitGuard = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TooLarge: return kExitGuard;
    case ErrorKind::IoError:
    case ErrorKind::SingularSystem:
    case ErrorKind::NoConvergence: return kExitFailure;
    default: return kExitValidation;
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

int cmd_solve(const std::string& graph_path, const std::string& out_dir) {
  const GraphInstance gi = load_graph_file(graph_path);
  const AbsorptionModel model = solve_absorption(gi.graph);
  const std::vector<double> z = equilibrium_opinions(model, gi.opinions);
  std::string csv = "node,z,ell\n";
  for (std::size_t i = 0; i < z.size(); ++i) {
    csv += std::to_string(i + 1) + "," + format_real(z[i]) + "," +
           format_real(model.ell[static_cast<Eigen::Index>(i)]) + "\n";
  }
  if (out_dir.empty()) {
    std::cout << csv;
  } else {
    write_text(std::filesystem::path(out_dir) / "solve.csv", csv);
  }
  return 0;
}

std::vector<ReportFormat> parse_formats(const std::string& list) {
  std::vector<ReportFormat> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") {
      out.push_back(ReportFormat::Csv);
    } else if (item == "json") {
      out.push_back(ReportFormat::Json);
    } else if (!item.empty()) {
      throw Error(ErrorKind::InvalidParam, "unknown format '" + item + "'");
    }
  }
  return out;
}

int cmd_play(RunConfig config, const std::string& formats, const std::string& out_dir) {
  const auto fmts = parse_formats(formats);
  if (exceeds_sampling_budget(config)) {
    std::cerr << "warning: T*r = "
              << static_cast<double>(config.horizon) * static_cast<double>(config.effective_samples())
              << " sample selections; this run may be slow\n";
  }
  const RunReport report = run_stackelberg(config);
  for (const auto& path : emit_report(report, fmts, out_dir)) std::cout << path.string() << "\n";
  std::cout << "T_min=" << report.t_min
            << " output_strategy=" << format_subset(report.output_strategy.subset())
            << " final_regret=" << format_real(report.regret_curve.back());
  if (report.gap) std::cout << " gap=" << format_real(report.gap->gap);
  std::cout << "\n";
  return 0;
}

int cmd_oracle(const std::string& graph_path, int k, const std::string& out_dir) {
  GraphInstance gi = load_graph_file(graph_path);
  const GameInstance inst = make_instance(std::move(gi.graph), std::move(gi.opinions), k);
  const MinmaxResult res = brute_minmax(inst);

  nlohmann::json j;
  j["version"] = kVersion;
  j["graph"] = graph_path;
  j["k"] = k;
  j["minmax_value"] = res.minmax_value;
  j["argmin_x"] = format_subset(res.argmin_x.subset());
  j["maxmin_value"] = res.maxmin_value;
  j["argmax_y"] = format_subset(res.argmax_y.subset());
  j["double_enumeration_checked"] = res.double_enumeration_checked;
  nlohmann::json table = nlohmann::json::array();
  for (const MinmaxRow& row : res.per_x_table) {
    table.push_back({{"x_subset", format_subset(row.x)}, {"worst_case", row.worst_case}});
  }
  j["per_x_table"] = std::move(table);
  write_text(std::filesystem::path(out_dir) / "oracle.json", j.dump(2) + "\n");

  std::cout << "minmax=" << format_real(res.minmax_value)
            << " argmin_x=" << format_subset(res.argmin_x.subset())
            << " maxmin=" << format_real(res.maxmin_value) << "\n";
  return 0;
}

int cmd_regret(const std::string& report_dir) {
  const RunReport report = read_report_json(read_text(std::filesystem::path(report_dir) / "report.json"));
  std::vector<PlayedRound> rounds;
  for (const RoundRecord& rec : report.rounds) rounds.push_back({rec.x, rec.y});
  const std::vector<double> curve = compute_regret(rounds, report.ell, report.s, report.config.k);

  bool ok = curve.size() == report.regret_curve.size();
  std::cout << "t,cum_regret\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    std::cout << report.rounds[i].t << "," << format_real(curve[i]) << "\n";
    if (ok && std::abs(curve[i] - report.regret_curve[i]) > 1e-9) ok = false;
  }
  if (!ok) {
    std::cerr << "stored regret curve does not match the recomputed one\n";
    return kExitValidation;
  }
  return 0;
}

int cmd_gen(const std::string& kind, int n, double p, std::uint64_t seed, double anchor,
            const std::string& opinions, const std::string& out) {
  GraphKind gk;
  if (kind == "path") {
    gk = GraphKind::Path;
  } else if (kind == "complete") {
    gk = GraphKind::Complete;
  } else if (kind == "random") {
    gk = GraphKind::Random;
  } else {
    throw Error(ErrorKind::InvalidParam, "unknown kind '" + kind + "'");
  }
  OpinionMode mode = OpinionMode::uniform();
  if (opinions != "uniform") {
    try {
      mode = OpinionMode::fixed(std::stod(opinions));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidParam, "--opinions takes 'uniform' or a number");
    }
  }
  const GraphInstance gi = generate_graph(gk, n, seed, anchor, mode, p);
  write_text(out, serialize_graph(gi.graph, gi.opinions));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg opinion optimization: equilibria, FTPL play, oracles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string graph_path, out_dir;
  auto* solve = app.add_subcommand("solve", "Equilibrium expressed opinions and influence weights");
  solve->add_option("--graph", graph_path, "Graph file")->required();
  solve->add_option("--out", out_dir, "Directory for solve.csv (default: stdout)");

  RunConfig config;
  std::string formats = "csv,json";
  auto* play = app.add_subcommand("play", "Run the FTPL min player against the adversary");
  play->add_option("--graph", config.graph_path, "Graph file")->required();
  play->add_option("--k", config.k, "Subset size for both players")->required();
  play->add_option("--T", config.horizon, "Horizon")->required();
  play->add_option("--r", config.samples, "Samples per round (default T)");
  play->add_option("--seed", config.seed, "64-bit seed")->required();
  play->add_flag("--gap", config.compute_gap, "Compute the equilibrium gap via the oracle");
  play->add_option("--format", formats, "Comma list of csv,json");
  play->add_option("--threads", config.threads, "Sampling threads (results do not depend on it)");
  play->add_option("--out", out_dir, "Output directory")->required();

  int oracle_k = 1;
  auto* oracle = app.add_subcommand("oracle", "Brute-force minmax and maxmin");
  oracle->add_option("--graph", graph_path, "Graph file")->required();
  oracle->add_option("--k", oracle_k, "Subset size")->required();
  oracle->add_option("--out", out_dir, "Output directory")->required();

  std::string report_dir;
  auto* regret = app.add_subcommand("regret", "Recompute and verify a stored regret curve");
  regret->add_option("--report", report_dir, "Directory holding report.json")->required();

  std::string kind, opinions = "uniform", gen_out;
  int gen_n = 0;
  double gen_p = 0.5, anchor = 1.0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Write a generated graph file");
  gen->add_option("--kind", kind, "path|complete|random")->required();
  gen->add_option("--n", gen_n, "Node count")->required();
  gen->add_option("--p", gen_p, "Edge probability for random graphs");
  gen->add_option("--seed", gen_seed, "Seed")->required();
  gen->add_option("--anchor", anchor, "Anchor weight for every node");
  gen->add_option("--opinions", opinions, "'uniform' or a constant in [-1, 1]");
  gen->add_option("--out", gen_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*solve) return cmd_solve(graph_path, out_dir);
    if (*play) return cmd_play(config, formats, out_dir);
    if (*oracle) return cmd_oracle(graph_path, oracle_k, out_dir);
    if (*regret) return cmd_regret(report_dir);
    if (*gen) return cmd_gen(kind, gen_n, gen_p, gen_seed, anchor, opinions, gen_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
