#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bdris/linkalg.hpp"

namespace bdris {

/// Gradient of user q's own rate with respect to its selection matrix. The
/// caller uses the real part; d R_q = sum_ij Re{Gamma}_ij dS_ij.
Eigen::MatrixXcd switch_grad_own(int q, const ChannelSet& ch,
                                 const std::vector<UserState>& states,
                                 const LinkTables& t, const Scenario& s);

/// Gradient of the other users' rates with respect to user q's selection
/// matrix (the switch pricing term).
Eigen::MatrixXcd switch_pricing(int q, const ChannelSet& ch,
                                const std::vector<UserState>& states,
                                const LinkTables& t, const Scenario& s);

/// Row-to-column assignment minimizing sum_i cost(i, col[i]) over
/// permutations; exact Kuhn-Munkres in O(M^3).
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Permutation matrix S maximizing trace(score^T S); exact optimum.
Eigen::MatrixXd solve_lsap_max(const Eigen::MatrixXd& score);

/// Selection-matrix update: maximizes
/// trace((Re{Gamma + Pi} + tau S_t)^T S) over permutations. Ties are broken
/// toward S_t so stationary points stay put.
Eigen::MatrixXd update_switch(const Eigen::MatrixXcd& gamma,
                              const Eigen::MatrixXcd& pi,
                              const Eigen::MatrixXd& s_t, double tau);

}  // namespace bdris
