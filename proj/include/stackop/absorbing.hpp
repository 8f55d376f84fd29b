#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "stackop/graph.hpp"

namespace stackop {

/// An absorbing state is either the absorbing copy of a node (which carries
/// the node's internal opinion) or a node that was itself made absorbing
/// (expressed-opinion control, carrying a fixed value).
struct AbsorbingState {
  NodeIndex node;
  bool is_copy;

  friend bool operator==(const AbsorbingState&, const AbsorbingState&) = default;
};

/// Absorbing random walk over a weighted graph. Rows of [P_UU | P_UB] are
/// stochastic. Q_UB and ell are empty until compute_qub has run.
struct AbsorptionModel {
  std::vector<NodeIndex> transient;
  std::vector<AbsorbingState> absorbing;
  Eigen::MatrixXd p_uu;
  Eigen::MatrixXd p_ub;
  Eigen::MatrixXd q_ub;
  Eigen::VectorXd ell;  // column sums of q_ub

  bool solved() const noexcept { return q_ub.size() > 0 || transient.empty(); }
};

/// Standard walk: every node transient, one absorbing copy per node. The
/// edge to the copy carries the anchor weight, so absorption reproduces the
/// best-response update exactly for any w_ii.
AbsorptionModel build_transition(const WeightedGraph& g);

/// Variant where the nodes in `fixed` are absorbing. Absorbing states are
/// the n copies (in node order) followed by the fixed nodes (ascending).
AbsorptionModel build_transition(const WeightedGraph& g, const std::vector<NodeIndex>& fixed);

/// Solves (I - P_UU) Q_UB = P_UB with partially pivoted LU and fills ell.
/// Throws SingularSystem if the pivot magnitude collapses.
AbsorptionModel compute_qub(AbsorptionModel model);

/// build_transition followed by compute_qub.
AbsorptionModel solve_absorption(const WeightedGraph& g);

/// z = Q_UB f_B over the transient nodes.
Eigen::VectorXd equilibrium_opinions(const AbsorptionModel& model, const Eigen::VectorXd& f_b);
std::vector<double> equilibrium_opinions(const AbsorptionModel& model, const OpinionVector& f_b);

/// One synchronous best-response sweep:
/// z_i <- (w_ii s_i + sum_j w_ij z_j) / (w_ii + sum_j w_ij).
std::vector<double> update_step(const WeightedGraph& g, const std::vector<double>& s,
                                const std::vector<double>& z);

struct DynamicsResult {
  std::vector<double> z;
  long iterations;
};

inline constexpr long kDefaultMaxIterations = 1'000'000;

/// Jacobi iteration of update_step from z = s until the sup-norm change
/// drops below tol. Throws NoConvergence after max_iter sweeps.
DynamicsResult iterate_dynamics(const WeightedGraph& g, const OpinionVector& s, double tol,
                                long max_iter = kDefaultMaxIterations);

/// Equilibrium when the nodes in `fixed` hold their expressed opinion at
/// fixed_value. Returns a full-length vector.
std::vector<double> expressed_control_equilibrium(const WeightedGraph& g, const OpinionVector& s,
                                                  const std::vector<NodeIndex>& fixed,
                                                  double fixed_value);

}  // namespace stackop
