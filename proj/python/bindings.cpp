#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "stackop/absorbing.hpp"
#include "stackop/adversary.hpp"
#include "stackop/errors.hpp"
#include "stackop/ftpl.hpp"
#include "stackop/game.hpp"
#include "stackop/graph.hpp"
#include "stackop/harness.hpp"
#include "stackop/oracle.hpp"

namespace py = pybind11;
using namespace stackop;

namespace {

// Node ids are 0-based on the Python side as well.

using EdgeTuple = std::tuple<NodeIndex, NodeIndex, double>;

WeightedGraph make_graph(std::vector<double> anchor, const std::vector<EdgeTuple>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [i, j, w] : edges) es.push_back({i, j, w});
  return validate_graph(WeightedGraph(std::move(anchor), std::move(es)));
}

std::vector<EdgeTuple> edge_tuples(const WeightedGraph& g) {
  std::vector<EdgeTuple> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.src, e.dst, e.weight);
  return out;
}

GraphKind parse_kind(const std::string& kind) {
  if (kind == "path") return GraphKind::Path;
  if (kind == "complete") return GraphKind::Complete;
  if (kind == "random") return GraphKind::Random;
  throw Error(ErrorKind::InvalidParam, "unknown graph kind '" + kind + "'");
}

std::optional<Strategy> max_strategy(const std::optional<std::vector<NodeIndex>>& y) {
  if (!y) return std::nullopt;
  return Strategy(Role::Max, *y);
}

py::dict gap_dict(const GapResult& g) {
  py::dict d;
  d["minmax_value"] = g.minmax_value;
  d["best_response_value"] = g.best_response_value;
  d["gap"] = g.gap;
  d["gap_plus"] = g.gap_plus;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stackelberg opinion-optimization game";
  m.attr("__version__") = std::string(kVersion.substr(kVersion.find(' ') + 1));

  static PyObject* error_type = PyErr_NewException("stackop.StackopError", PyExc_RuntimeError, nullptr);
  m.add_object("StackopError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (kind, message)
      py::tuple args = py::make_tuple(std::string(to_string(e.kind())), std::string(e.what()));
      PyErr_SetObject(error_type, args.ptr());
    }
  });

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("anchor"), py::arg("edges"),
           "Validated graph from self weights and (src, dst, weight) edges.")
      .def_property_readonly("n", &WeightedGraph::size)
      .def_property_readonly("anchor", &WeightedGraph::anchor)
      .def_property_readonly("edges", &edge_tuples)
      .def("total_weight", &WeightedGraph::total_weight)
      .def("__len__", &WeightedGraph::size)
      .def("__eq__", [](const WeightedGraph& a, const WeightedGraph& b) { return a == b; });

  py::class_<GraphInstance>(m, "GraphInstance")
      .def_readonly("graph", &GraphInstance::graph)
      .def_property_readonly("opinions", [](const GraphInstance& gi) { return gi.opinions.values(); });

  m.def("load_graph", &load_graph, py::arg("text"));
  m.def("load_graph_file", &load_graph_file, py::arg("path"));
  m.def(
      "serialize_graph",
      [](const WeightedGraph& g, std::vector<double> s) { return serialize_graph(g, OpinionVector(std::move(s))); },
      py::arg("graph"), py::arg("opinions"));
  m.def(
      "generate_graph",
      [](const std::string& kind, int n, std::uint64_t seed, double anchor, std::optional<double> opinion,
         double p) {
        return generate_graph(parse_kind(kind), n, seed, anchor,
                              opinion ? OpinionMode::fixed(*opinion) : OpinionMode::uniform(), p);
      },
      py::arg("kind"), py::arg("n"), py::arg("seed"), py::arg("anchor") = 1.0,
      py::arg("opinion") = py::none(), py::arg("p") = 0.5,
      "kind is 'path', 'complete' or 'random'; opinion=None draws uniform opinions.");

  py::class_<AbsorptionModel>(m, "AbsorptionModel")
      .def_readonly("transient", &AbsorptionModel::transient)
      .def_readonly("p_uu", &AbsorptionModel::p_uu)
      .def_readonly("p_ub", &AbsorptionModel::p_ub)
      .def_readonly("q_ub", &AbsorptionModel::q_ub)
      .def_readonly("ell", &AbsorptionModel::ell);

  m.def("solve_absorption", &solve_absorption, py::arg("graph"));
  m.def(
      "equilibrium_opinions",
      [](const AbsorptionModel& model, std::vector<double> s) {
        return equilibrium_opinions(model, OpinionVector(std::move(s)));
      },
      py::arg("model"), py::arg("opinions"));
  m.def(
      "iterate_dynamics",
      [](const WeightedGraph& g, std::vector<double> s, double tol, long max_iter) {
        const DynamicsResult r = iterate_dynamics(g, OpinionVector(std::move(s)), tol, max_iter);
        return py::make_tuple(r.z, r.iterations);
      },
      py::arg("graph"), py::arg("opinions"), py::arg("tol") = 1e-12,
      py::arg("max_iter") = kDefaultMaxIterations, "Returns (z, iterations).");
  m.def(
      "expressed_control_equilibrium",
      [](const WeightedGraph& g, std::vector<double> s, const std::vector<NodeIndex>& fixed, double value) {
        return expressed_control_equilibrium(g, OpinionVector(std::move(s)), fixed, value);
      },
      py::arg("graph"), py::arg("opinions"), py::arg("fixed"), py::arg("value"));

  py::class_<GameInstance>(m, "Game")
      .def(py::init([](WeightedGraph g, std::vector<double> s, int k) {
             return make_instance(std::move(g), OpinionVector(std::move(s)), k);
           }),
           py::arg("graph"), py::arg("opinions"), py::arg("k"))
      .def_property_readonly("n", &GameInstance::n)
      .def_readonly("k", &GameInstance::k)
      .def_readonly("ell", &GameInstance::ell)
      .def_readonly("graph", &GameInstance::graph)
      .def_property_readonly("opinions", [](const GameInstance& g) { return g.s.values(); });

  m.def(
      "cost_g",
      [](const GameInstance& inst, const std::vector<NodeIndex>& x,
         const std::optional<std::vector<NodeIndex>>& y) {
        return cost_g(inst, Strategy(Role::Min, x), max_strategy(y));
      },
      py::arg("game"), py::arg("x"), py::arg("y") = py::none());
  m.def(
      "loss_f",
      [](const GameInstance& inst, const std::vector<NodeIndex>& adversary, const std::vector<NodeIndex>& x) {
        return loss_f(inst, adversary, Strategy(Role::Min, x));
      },
      py::arg("game"), py::arg("adversary"), py::arg("x"));

  py::class_<FtplState>(m, "FtplState")
      .def(py::init<const GameInstance&, long, std::uint64_t>(), py::arg("game"), py::arg("horizon"),
           py::arg("seed"), py::keep_alive<1, 2>())
      .def_property_readonly("round", &FtplState::round)
      .def_property_readonly("counts", &FtplState::counts)
      .def_property_readonly("history", &FtplState::history)
      .def("record_adversary", &FtplState::record_adversary, py::arg("subset"))
      .def(
          "draw_perturbation", [](const FtplState& st, std::uint64_t index) { return draw_perturbation(st, index); },
          py::arg("index") = 0)
      .def(
          "select", [](const FtplState& st, const std::vector<double>& r) { return ftpl_select(st, r).subset(); },
          py::arg("perturbation"))
      .def(
          "brute_select",
          [](const FtplState& st, const std::vector<double>& r) { return brute_ftpl_argmin(st, r).subset(); },
          py::arg("perturbation"))
      .def(
          "estimate_selection_probs",
          [](const FtplState& st, long r, int threads) {
            py::gil_scoped_release release;
            return estimate_selection_probs(st, r, threads).p_hat;
          },
          py::arg("r"), py::arg("threads") = 1);

  m.def(
      "expected_modified_opinions",
      [](std::vector<double> s, const std::vector<double>& p) {
        return expected_modified_opinions(OpinionVector(std::move(s)), p);
      },
      py::arg("opinions"), py::arg("p_hat"));
  m.def(
      "delta_scores",
      [](const std::vector<double>& ell, std::vector<double> s, const std::vector<double>& p) {
        return delta_scores(ell, OpinionVector(std::move(s)), p).delta;
      },
      py::arg("ell"), py::arg("opinions"), py::arg("p_hat"));
  m.def(
      "best_response_topk",
      [](std::vector<double> delta, int k) { return best_response_topk(DeltaScores{std::move(delta)}, k).subset(); },
      py::arg("delta"), py::arg("k"));
  m.def(
      "exact_best_response",
      [](const std::vector<double>& ell, const std::vector<double>& v, int k) {
        return exact_best_response(ell, v, k).subset();
      },
      py::arg("ell"), py::arg("v"), py::arg("k"));

  m.def(
      "brute_minmax",
      [](const GameInstance& inst) {
        MinmaxResult r;
        {
          py::gil_scoped_release release;
          r = brute_minmax(inst);
        }
        py::dict d;
        d["minmax_value"] = r.minmax_value;
        d["argmin_x"] = r.argmin_x.subset();
        d["maxmin_value"] = r.maxmin_value;
        d["argmax_y"] = r.argmax_y.subset();
        py::list table;
        for (const MinmaxRow& row : r.per_x_table) table.append(py::make_tuple(row.x, row.worst_case));
        d["per_x_table"] = table;
        return d;
      },
      py::arg("game"));

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("t_min", &RunReport::t_min)
      .def_readonly("avg_p", &RunReport::avg_p)
      .def_readonly("regret_curve", &RunReport::regret_curve)
      .def_property_readonly("output_strategy", [](const RunReport& r) { return r.output_strategy.subset(); })
      .def_property_readonly("x", [](const RunReport& r) {
        std::vector<std::vector<NodeIndex>> out;
        for (const RoundRecord& rec : r.rounds) out.push_back(rec.x);
        return out;
      })
      .def_property_readonly("y", [](const RunReport& r) {
        std::vector<std::vector<NodeIndex>> out;
        for (const RoundRecord& rec : r.rounds) out.push_back(rec.y);
        return out;
      })
      .def_property_readonly("gap",
                             [](const RunReport& r) -> py::object {
                               if (!r.gap) return py::none();
                               return gap_dict(*r.gap);
                             })
      .def("rounds_csv", &rounds_csv)
      .def("to_json", &report_json);

  m.def(
      "run_stackelberg",
      [](const GameInstance& inst, long horizon, std::uint64_t seed, long samples, bool gap, int threads) {
        RunConfig c;
        c.k = inst.k;
        c.horizon = horizon;
        c.samples = samples;
        c.seed = seed;
        c.compute_gap = gap;
        c.threads = threads;
        py::gil_scoped_release release;
        return run_stackelberg(inst, c);
      },
      py::arg("game"), py::arg("horizon"), py::arg("seed"), py::arg("samples") = 0, py::arg("gap") = false,
      py::arg("threads") = 1, "samples=0 uses r = horizon.");

  m.def(
      "compute_regret",
      [](const std::vector<std::vector<NodeIndex>>& xs, const std::vector<std::vector<NodeIndex>>& ys,
         const std::vector<double>& ell, const std::vector<double>& s, int k) {
        if (xs.size() != ys.size()) throw Error(ErrorKind::DimensionMismatch, "x and adversary histories differ");
        std::vector<PlayedRound> rounds;
        for (std::size_t t = 0; t < xs.size(); ++t) rounds.push_back({xs[t], ys[t]});
        return compute_regret(rounds, ell, s, k);
      },
      py::arg("x"), py::arg("adversary"), py::arg("ell"), py::arg("opinions"), py::arg("k"));

  m.def(
      "equilibrium_gap",
      [](const std::vector<double>& avg_p, const GameInstance& inst) { return gap_dict(equilibrium_gap(avg_p, inst)); },
      py::arg("avg_p"), py::arg("game"));
}
