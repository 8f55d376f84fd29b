#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "stackop/errors.hpp"
#include "stackop/harness.hpp"
#include "stackop/rng.hpp"

namespace stackop {

using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string rounds_csv(const RunReport& report) {
  std::string out = "t,x_subset,y_subset,realized_loss,expected_loss_estimate,cum_regret\n";
  for (std::size_t i = 0; i < report.rounds.size(); ++i) {
    const RoundRecord& rec = report.rounds[i];
    out += std::to_string(rec.t) + "," + format_subset(rec.x) + "," + format_subset(rec.y) + "," +
           format_real(rec.realized_loss) + "," + format_real(rec.expected_loss_estimate) + "," +
           format_real(report.regret_curve.at(i)) + "\n";
  }
  return out;
}

std::string report_json(const RunReport& report) {
  const RunConfig& c = report.config;
  json j;
  j["version"] = kVersion;
  j["config"] = {
      {"graph", c.graph_path},
      {"k", c.k},
      {"T", c.horizon},
      {"r", c.effective_samples()},
      {"seed", c.seed},
      {"rng", rng::kGeneratorName},
      {"compute_gap", c.compute_gap},
  };
  j["instance"] = {{"n", report.s.size()}, {"s", report.s}, {"ell", report.ell}};
  j["T_min"] = report.t_min;
  j["output_strategy"] = format_subset(report.output_strategy.subset());
  j["avg_p"] = report.avg_p;
  if (report.gap) {
    j["minmax_value"] = report.gap->minmax_value;
    j["best_response_value"] = report.gap->best_response_value;
    j["gap"] = report.gap->gap;
    j["gap_plus"] = report.gap->gap_plus;
  }
  json rounds = json::array();
  for (std::size_t i = 0; i < report.rounds.size(); ++i) {
    const RoundRecord& rec = report.rounds[i];
    rounds.push_back({
        {"t", rec.t},
        {"x_subset", format_subset(rec.x)},
        {"y_subset", format_subset(rec.y)},
        {"p_hat", rec.p_hat.p_hat},
        {"realized_loss", rec.realized_loss},
        {"expected_loss_estimate", rec.expected_loss_estimate},
        {"cum_regret", report.regret_curve.at(i)},
    });
  }
  j["rounds"] = std::move(rounds);
  return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const RunReport& report,
                                               const std::vector<ReportFormat>& formats,
                                               const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  if (formats.empty()) return written;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

  bool csv = false, js = false;
  for (ReportFormat f : formats) (f == ReportFormat::Csv ? csv : js) = true;
  if (csv) {
    written.push_back(dir / "rounds.csv");
    write_file(written.back(), rounds_csv(report));
  }
  if (js) {
    written.push_back(dir / "report.json");
    write_file(written.back(), report_json(report));
  }
  return written;
}

RunReport read_report_json(std::string_view text) {
  RunReport report;
  try {
    const json j = json::parse(text);
    const json& c = j.at("config");
    report.config.graph_path = c.at("graph").get<std::string>();
    report.config.k = c.at("k").get<int>();
    report.config.horizon = c.at("T").get<long>();
    report.config.samples = c.at("r").get<long>();
    report.config.seed = c.at("seed").get<std::uint64_t>();
    report.config.compute_gap = c.at("compute_gap").get<bool>();
    report.s = j.at("instance").at("s").get<std::vector<double>>();
    report.ell = j.at("instance").at("ell").get<std::vector<double>>();
    report.t_min = j.at("T_min").get<long>();
    report.output_strategy =
        Strategy(Role::Min, parse_subset(j.at("output_strategy").get<std::string>()));
    report.avg_p = j.at("avg_p").get<std::vector<double>>();
    if (j.contains("gap")) {
      report.gap = GapResult{j.at("minmax_value").get<double>(), j.at("best_response_value").get<double>(),
                             j.at("gap").get<double>(), j.at("gap_plus").get<double>()};
    }
    for (const json& r : j.at("rounds")) {
      RoundRecord rec;
      rec.t = r.at("t").get<long>();
      rec.x = parse_subset(r.at("x_subset").get<std::string>());
      rec.y = parse_subset(r.at("y_subset").get<std::string>());
      rec.p_hat.p_hat = r.at("p_hat").get<std::vector<double>>();
      rec.p_hat.samples = report.config.samples;
      rec.realized_loss = r.at("realized_loss").get<double>();
      rec.expected_loss_estimate = r.at("expected_loss_estimate").get<double>();
      report.regret_curve.push_back(r.at("cum_regret").get<double>());
      report.rounds.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report.json: ") + e.what());
  }
  return report;
}

}  // namespace stackop
