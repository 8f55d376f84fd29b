#include "stackop/game.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "stackop/errors.hpp"

namespace stackop {

Strategy::Strategy(Role role, std::vector<NodeIndex> subset) : role_(role), subset_(std::move(subset)) {
  std::sort(subset_.begin(), subset_.end());
  if (std::adjacent_find(subset_.begin(), subset_.end()) != subset_.end()) {
    throw Error(ErrorKind::InvalidParam, "strategy subset has duplicate ids");
  }
  if (!subset_.empty() && subset_.front() < 0) {
    throw Error(ErrorKind::IndexOutOfRange, "negative node id in strategy");
  }
}

bool Strategy::contains(NodeIndex i) const {
  return std::binary_search(subset_.begin(), subset_.end(), i);
}

std::string format_subset(const std::vector<NodeIndex>& subset) {
  std::vector<NodeIndex> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(sorted[i] + 1);
  }
  return out;
}

std::vector<NodeIndex> parse_subset(std::string_view text) {
  std::vector<NodeIndex> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view tok = text.substr(pos, end - pos);
    int id = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || id < 1) {
      throw Error(ErrorKind::ParseError, "bad subset '" + std::string(text) + "'");
    }
    out.push_back(id - 1);
    pos = end + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

GameInstance make_instance(WeightedGraph graph, OpinionVector s, int k) {
  if (s.size() != graph.size()) throw Error(ErrorKind::DimensionMismatch, "opinions vs nodes");
  if (k < 1 || k > graph.size()) {
    throw Error(ErrorKind::InvalidParam,
                "k must lie in 1.." + std::to_string(graph.size()) + ", got " + std::to_string(k));
  }
  GameInstance inst;
  inst.model = solve_absorption(graph);
  inst.ell.assign(inst.model.ell.data(), inst.model.ell.data() + inst.model.ell.size());
  inst.graph = std::move(graph);
  inst.s = std::move(s);
  inst.k = k;
  return inst;
}

namespace {

void check_range(const Strategy& st, int n) {
  if (!st.subset().empty() && st.subset().back() >= n) {
    throw Error(ErrorKind::IndexOutOfRange, "strategy id outside the graph");
  }
}

}  // namespace

std::vector<double> apply_strategies(const OpinionVector& s, const Strategy& x,
                                     const std::optional<Strategy>& y) {
  if (x.role() != Role::Min) throw Error(ErrorKind::RoleMismatch, "x must be a min strategy");
  if (y && y->role() != Role::Max) throw Error(ErrorKind::RoleMismatch, "y must be a max strategy");
  check_range(x, s.size());
  std::vector<double> out = s.values();
  for (NodeIndex i : x.subset()) out[i] = -1.0;
  if (y) {
    check_range(*y, s.size());
    for (NodeIndex i : y->subset()) out[i] = 1.0;
  }
  return out;
}

double cost_g(const GameInstance& inst, const Strategy& x, const std::optional<Strategy>& y) {
  const std::vector<double> final_s = apply_strategies(inst.s, x, y);
  return std::inner_product(inst.ell.begin(), inst.ell.end(), final_s.begin(), 0.0);
}

double loss_f(const GameInstance& inst, const std::vector<NodeIndex>& adversary,
              const Strategy& x) {
  if (x.role() != Role::Min) throw Error(ErrorKind::RoleMismatch, "x must be a min strategy");
  const int n = inst.n();
  check_range(x, n);
  std::vector<char> in_n(static_cast<std::size_t>(n), 0);
  for (NodeIndex i : adversary) {
    if (i < 0 || i >= n) throw Error(ErrorKind::IndexOutOfRange, "adversary id outside the graph");
    in_n[i] = 1;
  }
  double total = 0;
  for (int i = 0; i < n; ++i) {
    if (in_n[i]) {
      total += inst.ell[i];
    } else {
      const double delta = x.contains(i) ? -1.0 - inst.s[i] : 0.0;
      total += inst.ell[i] * (delta + inst.s[i]);
    }
  }
  return total;
}

double individual_cost(const WeightedGraph& g, const std::vector<double>& z,
                       const OpinionVector& s, NodeIndex i) {
  if (i < 0 || i >= g.size()) throw Error(ErrorKind::IndexOutOfRange, "node " + std::to_string(i));
  if (static_cast<int>(z.size()) != g.size() || s.size() != g.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from node count");
  }
  const double own = z[i] - s[i];
  double c = g.anchor()[i] * own * own;
  auto [first, last] = g.neighbors(i);
  for (const Edge* e = first; e != last; ++e) {
    const double d = z[i] - z[e->dst];
    c += e->weight * d * d;
  }
  return c;
}

double social_cost(const std::vector<double>& z) { return std::accumulate(z.begin(), z.end(), 0.0); }

}  // namespace stackop
