#include "stackop/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stackop/errors.hpp"
#include "stackop/rng.hpp"

namespace stackop {

namespace {

std::string format_shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

WeightedGraph::WeightedGraph(std::vector<double> anchor, std::vector<Edge> edges)
    : anchor_(std::move(anchor)), edges_(std::move(edges)) {
  const int n = size();
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw Error(ErrorKind::IndexOutOfRange, "edge endpoint outside 0.." + std::to_string(n - 1));
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  row_start_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges_) ++row_start_[static_cast<std::size_t>(e.src) + 1];
  for (std::size_t i = 1; i < row_start_.size(); ++i) row_start_[i] += row_start_[i - 1];
}

std::pair<const Edge*, const Edge*> WeightedGraph::neighbors(NodeIndex i) const {
  if (i < 0 || i >= size()) throw Error(ErrorKind::IndexOutOfRange, "node " + std::to_string(i));
  const Edge* base = edges_.data();
  return {base + row_start_[i], base + row_start_[i + 1]};
}

double WeightedGraph::total_weight(NodeIndex i) const {
  auto [first, last] = neighbors(i);
  double d = anchor_[i];
  for (const Edge* e = first; e != last; ++e) d += e->weight;
  return d;
}

WeightedGraph validate_graph(WeightedGraph raw) {
  if (raw.size() == 0) throw Error(ErrorKind::InvalidParam, "graph has no nodes");
  for (int i = 0; i < raw.size(); ++i) {
    const double a = raw.anchor()[i];
    if (!std::isfinite(a)) throw Error(ErrorKind::NonFinite, "anchor of node " + std::to_string(i));
    if (a < 0) throw Error(ErrorKind::NegativeWeight, "anchor of node " + std::to_string(i));
    if (a == 0) throw Error(ErrorKind::ZeroAnchor, "node " + std::to_string(i));
  }
  const auto& edges = raw.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const std::string where = "edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")";
    if (!std::isfinite(e.weight)) throw Error(ErrorKind::NonFinite, where);
    if (e.weight < 0) throw Error(ErrorKind::NegativeWeight, where);
    if (e.src == e.dst) throw Error(ErrorKind::InvalidParam, "self loop " + where);
    if (k > 0 && edges[k - 1].src == e.src && edges[k - 1].dst == e.dst) {
      throw Error(ErrorKind::InvalidParam, "duplicate " + where);
    }
  }
  return raw;
}

OpinionVector::OpinionVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "opinion " + std::to_string(i));
    if (v < -1.0 || v > 1.0) {
      throw Error(ErrorKind::InvalidParam, "opinion " + std::to_string(i) + " outside [-1, 1]");
    }
  }
}

GraphInstance load_graph(std::string_view text) {
  std::vector<double> anchor;
  std::vector<double> opinions;
  std::vector<Edge> edges;
  bool seen_edge = false;
  int line_no = 0;

  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + msg);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "node") {
      if (tok.size() != 4) fail("expected 'node <id> <anchor_weight> <internal_opinion>'");
      if (seen_edge) fail("node line after edge lines");
      long long id = 0;
      double a = 0, s = 0;
      if (!parse_int(tok[1], id)) fail("bad node id");
      if (id != static_cast<long long>(anchor.size()) + 1) {
        fail("node ids must be 1..n in order; got " + std::string(tok[1]));
      }
      if (!parse_double(tok[2], a) || !parse_double(tok[3], s)) fail("bad number");
      if (!std::isfinite(s) || s < -1.0 || s > 1.0) fail("internal opinion outside [-1, 1]");
      anchor.push_back(a);
      opinions.push_back(s);
    } else if (tok[0] == "edge") {
      if (tok.size() != 4) fail("expected 'edge <src> <dst> <weight>'");
      seen_edge = true;
      long long src = 0, dst = 0;
      double w = 0;
      if (!parse_int(tok[1], src) || !parse_int(tok[2], dst)) fail("bad edge endpoint");
      if (!parse_double(tok[3], w)) fail("bad edge weight");
      const auto n = static_cast<long long>(anchor.size());
      if (src < 1 || src > n || dst < 1 || dst > n) fail("edge references undeclared node");
      if (src == dst) fail("self loop; self weight belongs in the node line");
      edges.push_back({static_cast<NodeIndex>(src - 1), static_cast<NodeIndex>(dst - 1), w});
    } else {
      fail("unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (anchor.empty()) throw Error(ErrorKind::ParseError, "no node lines");

  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].src == sorted[k - 1].src && sorted[k].dst == sorted[k - 1].dst) {
      throw Error(ErrorKind::ParseError, "duplicate edge " + std::to_string(sorted[k].src + 1) +
                                             " " + std::to_string(sorted[k].dst + 1));
    }
  }

  return {validate_graph(WeightedGraph(std::move(anchor), std::move(edges))),
          OpinionVector(std::move(opinions))};
}

GraphInstance load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph(buf.str());
}

std::string serialize_graph(const WeightedGraph& g, const OpinionVector& s) {
  if (s.size() != g.size()) throw Error(ErrorKind::DimensionMismatch, "opinions vs nodes");
  std::string out;
  for (int i = 0; i < g.size(); ++i) {
    out += "node " + std::to_string(i + 1) + " " + format_shortest(g.anchor()[i]) + " " +
           format_shortest(s[i]) + "\n";
  }
  for (const Edge& e : g.edges()) {
    out += "edge " + std::to_string(e.src + 1) + " " + std::to_string(e.dst + 1) + " " +
           format_shortest(e.weight) + "\n";
  }
  return out;
}

GraphInstance generate_graph(GraphKind kind, int n, std::uint64_t seed, double anchor_value,
                             OpinionMode opinions, double p) {
  if (n < 1) throw Error(ErrorKind::InvalidParam, "n must be >= 1");
  if (!(anchor_value > 0) || !std::isfinite(anchor_value)) {
    throw Error(ErrorKind::InvalidParam, "anchor_value must be positive");
  }
  if (kind == GraphKind::Random && !(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::InvalidParam, "p must lie in [0, 1]");
  }
  if (!opinions.uniform_random && !(opinions.constant >= -1.0 && opinions.constant <= 1.0)) {
    throw Error(ErrorKind::InvalidParam, "constant opinion outside [-1, 1]");
  }

  std::vector<Edge> edges;
  switch (kind) {
    case GraphKind::Path:
      for (int i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1, 1.0});
        edges.push_back({i + 1, i, 1.0});
      }
      break;
    case GraphKind::Complete:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) edges.push_back({i, j, 1.0});
      break;
    case GraphKind::Random: {
      rng::Stream stream(seed, rng::Purpose::Graph, 0, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && stream.uniform01() < p) edges.push_back({i, j, 1.0});
      break;
    }
  }

  std::vector<double> s(static_cast<std::size_t>(n), opinions.constant);
  if (opinions.uniform_random) {
    rng::Stream stream(seed, rng::Purpose::Graph, 0, 1);
    for (double& v : s) v = 2.0 * stream.uniform01() - 1.0;
  }

  return {validate_graph(WeightedGraph(std::vector<double>(static_cast<std::size_t>(n), anchor_value),
                                       std::move(edges))),
          OpinionVector(std::move(s))};
}

}  // namespace stackop
