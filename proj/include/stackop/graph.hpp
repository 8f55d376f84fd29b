#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stackop {

/// Node index, 0-based in the library. Text formats use 1-based ids.
using NodeIndex = int;

struct Edge {
  NodeIndex src;  // the influenced node i
  NodeIndex dst;  // the influencing node j
  double weight;  // w_ij

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed influence network. `anchor[i]` is the self weight w_ii; the edge
/// (i, j) with weight w_ij says how strongly i is pulled toward j. Edges are
/// kept sorted by (src, dst) with no duplicates and no self loops.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::vector<double> anchor, std::vector<Edge> edges);

  int size() const noexcept { return static_cast<int>(anchor_.size()); }
  const std::vector<double>& anchor() const noexcept { return anchor_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Out-edges of node i as a contiguous range of `edges()`.
  std::pair<const Edge*, const Edge*> neighbors(NodeIndex i) const;

  /// anchor[i] + sum_j w_ij.
  double total_weight(NodeIndex i) const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::vector<double> anchor_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_start_;
};

/// Checks every graph invariant and returns the graph unchanged, or throws
/// NegativeWeight / ZeroAnchor / NonFinite / InvalidParam.
WeightedGraph validate_graph(WeightedGraph raw);

/// Real vector with every entry in [-1, 1].
class OpinionVector {
 public:
  OpinionVector() = default;
  explicit OpinionVector(std::vector<double> values);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const OpinionVector&, const OpinionVector&) = default;

 private:
  std::vector<double> values_;
};

struct GraphInstance {
  WeightedGraph graph;
  OpinionVector opinions;
};

GraphInstance load_graph(std::string_view text);
GraphInstance load_graph_file(const std::string& path);

/// Inverse of load_graph; weights are written in shortest round-trip form.
std::string serialize_graph(const WeightedGraph& g, const OpinionVector& s);

enum class GraphKind { Path, Complete, Random };

struct OpinionMode {
  bool uniform_random = true;
  double constant = 0.0;  // used when !uniform_random

  static OpinionMode uniform() { return {true, 0.0}; }
  static OpinionMode fixed(double c) { return {false, c}; }
};

/// Pure function of its arguments. Path and complete graphs use unit
/// weights in both directions; Random includes every ordered pair (i, j),
/// i != j, independently with probability p.
GraphInstance generate_graph(GraphKind kind, int n, std::uint64_t seed, double anchor_value,
                             OpinionMode opinions, double p = 0.5);

}  // namespace stackop
