#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bdris/linkalg.hpp"

namespace bdris {

/// The capacitance subproblem works in picofarads so its proximal weight is
/// commensurate with the precoder and selection-matrix blocks.
inline constexpr double kPicofarad = 1e-12;

/// Analytic gradient of user q's own rate with respect to its capacitance
/// vector, evaluated at the snapshot in `states`/`t`. Real M-vector,
/// d R_q = gamma^T dc.
Eigen::VectorXd capacitance_grad_own(int q, const ChannelSet& ch,
                                     const std::vector<UserState>& states,
                                     const LinkTables& t, const Scenario& s);

/// Analytic gradient of the other users' rates with respect to user q's
/// capacitances (the capacitance pricing term).
Eigen::VectorXd capacitance_pricing(int q, const ChannelSet& ch,
                                    const std::vector<UserState>& states,
                                    const LinkTables& t, const Scenario& s);

/// Closed-form box-projected maximizer of the capacitance subproblem:
/// elementwise clamp of beta/tau to the box, with
/// beta = tau c_t + gamma + pricing evaluated in picofarad units (inputs
/// and the returned vector stay in farads).
Eigen::VectorXd update_capacitance(const Eigen::VectorXd& c_t,
                                   const Eigen::VectorXd& gamma,
                                   const Eigen::VectorXd& pricing, double tau,
                                   const CircuitParams& bounds);

}  // namespace bdris
