#include "stackop/absorbing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stackop/errors.hpp"

namespace stackop {

namespace {

// Below this reciprocal condition estimate the LU factors are not trusted.
constexpr double kMinRcond = 1e-14;

}  // namespace

AbsorptionModel build_transition(const WeightedGraph& g) { return build_transition(g, {}); }

AbsorptionModel build_transition(const WeightedGraph& g, const std::vector<NodeIndex>& fixed) {
  const int n = g.size();
  std::vector<NodeIndex> fixed_sorted = fixed;
  std::sort(fixed_sorted.begin(), fixed_sorted.end());
  fixed_sorted.erase(std::unique(fixed_sorted.begin(), fixed_sorted.end()), fixed_sorted.end());
  for (NodeIndex v : fixed_sorted) {
    if (v < 0 || v >= n) throw Error(ErrorKind::IndexOutOfRange, "fixed node " + std::to_string(v));
  }

  // Position of node v among the transient rows, or among the fixed absorbing
  // states (encoded as -1 - position).
  std::vector<int> slot(static_cast<std::size_t>(n));
  AbsorptionModel m;
  {
    std::size_t f = 0;
    for (NodeIndex v = 0; v < n; ++v) {
      if (f < fixed_sorted.size() && fixed_sorted[f] == v) {
        slot[v] = -1 - static_cast<int>(f++);
      } else {
        slot[v] = static_cast<int>(m.transient.size());
        m.transient.push_back(v);
      }
    }
  }
  for (NodeIndex v = 0; v < n; ++v) m.absorbing.push_back({v, true});
  for (NodeIndex v : fixed_sorted) m.absorbing.push_back({v, false});

  const auto nu = static_cast<Eigen::Index>(m.transient.size());
  const auto nb = static_cast<Eigen::Index>(m.absorbing.size());
  m.p_uu = Eigen::MatrixXd::Zero(nu, nu);
  m.p_ub = Eigen::MatrixXd::Zero(nu, nb);

  for (Eigen::Index row = 0; row < nu; ++row) {
    const NodeIndex i = m.transient[row];
    const double d = g.total_weight(i);
    m.p_ub(row, i) = g.anchor()[i] / d;
    auto [first, last] = g.neighbors(i);
    for (const Edge* e = first; e != last; ++e) {
      const int s = slot[e->dst];
      if (s >= 0) {
        m.p_uu(row, s) += e->weight / d;
      } else {
        m.p_ub(row, n + (-1 - s)) += e->weight / d;
      }
    }
  }
  return m;
}

AbsorptionModel compute_qub(AbsorptionModel model) {
  const Eigen::Index nu = model.p_uu.rows();
  const Eigen::Index nb = model.p_ub.cols();
  if (nu == 0) {
    model.q_ub = Eigen::MatrixXd::Zero(0, nb);
    model.ell = Eigen::VectorXd::Zero(nb);
    return model;
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(nu, nu) - model.p_uu;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > kMinRcond)) {
    throw Error(ErrorKind::SingularSystem,
                "I - P_UU is numerically singular (rcond " + std::to_string(rcond) + ")");
  }
  model.q_ub = lu.solve(model.p_ub);
  model.ell = model.q_ub.colwise().sum().transpose();
  return model;
}

AbsorptionModel solve_absorption(const WeightedGraph& g) { return compute_qub(build_transition(g)); }

Eigen::VectorXd equilibrium_opinions(const AbsorptionModel& model, const Eigen::VectorXd& f_b) {
  if (!model.solved()) throw Error(ErrorKind::InvalidParam, "Q_UB has not been computed");
  if (f_b.size() != static_cast<Eigen::Index>(model.absorbing.size())) {
    throw Error(ErrorKind::DimensionMismatch,
                "f_B has " + std::to_string(f_b.size()) + " entries, expected " +
                    std::to_string(model.absorbing.size()));
  }
  if (model.transient.empty()) return Eigen::VectorXd(0);
  return model.q_ub * f_b;
}

std::vector<double> equilibrium_opinions(const AbsorptionModel& model, const OpinionVector& f_b) {
  const Eigen::VectorXd fb = Eigen::Map<const Eigen::VectorXd>(f_b.values().data(), f_b.size());
  const Eigen::VectorXd z = equilibrium_opinions(model, fb);
  return {z.data(), z.data() + z.size()};
}

std::vector<double> update_step(const WeightedGraph& g, const std::vector<double>& s,
                                const std::vector<double>& z) {
  const int n = g.size();
  if (static_cast<int>(s.size()) != n || static_cast<int>(z.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from node count");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double num = g.anchor()[i] * s[i];
    double den = g.anchor()[i];
    auto [first, last] = g.neighbors(i);
    for (const Edge* e = first; e != last; ++e) {
      num += e->weight * z[e->dst];
      den += e->weight;
    }
    out[i] = num / den;
  }
  return out;
}

DynamicsResult iterate_dynamics(const WeightedGraph& g, const OpinionVector& s, double tol,
                                long max_iter) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidParam, "tol must be positive");
  std::vector<double> z = s.values();
  for (long it = 1; it <= max_iter; ++it) {
    std::vector<double> next = update_step(g, s.values(), z);
    double change = 0;
    for (std::size_t i = 0; i < z.size(); ++i) change = std::max(change, std::abs(next[i] - z[i]));
    z = std::move(next);
    if (change < tol) return {std::move(z), it};
  }
  throw Error(ErrorKind::NoConvergence, "no convergence after " + std::to_string(max_iter) +
                                            " sweeps");
}

std::vector<double> expressed_control_equilibrium(const WeightedGraph& g, const OpinionVector& s,
                                                  const std::vector<NodeIndex>& fixed,
                                                  double fixed_value) {
  if (s.size() != g.size()) throw Error(ErrorKind::DimensionMismatch, "opinions vs nodes");
  if (!(fixed_value >= -1.0 && fixed_value <= 1.0)) {
    throw Error(ErrorKind::InvalidParam, "fixed_value outside [-1, 1]");
  }
  const AbsorptionModel model = compute_qub(build_transition(g, fixed));

  Eigen::VectorXd f_b(static_cast<Eigen::Index>(model.absorbing.size()));
  for (std::size_t b = 0; b < model.absorbing.size(); ++b) {
    const AbsorbingState& st = model.absorbing[b];
    f_b[static_cast<Eigen::Index>(b)] = st.is_copy ? s[st.node] : fixed_value;
  }

  std::vector<double> z(static_cast<std::size_t>(g.size()), fixed_value);
  const Eigen::VectorXd zu = equilibrium_opinions(model, f_b);
  for (std::size_t row = 0; row < model.transient.size(); ++row) {
    z[model.transient[row]] = zu[static_cast<Eigen::Index>(row)];
  }
  return z;
}

}  // namespace stackop
