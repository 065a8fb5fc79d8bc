#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bdris/linkalg.hpp"

namespace bdris {

/// Per-subcarrier pricing of one user's precoder: the first-order change of
/// the other users' rates, reported so that d(sum_j R_j) = Re{pi^H dw}.
struct PrecoderPricing {
  std::vector<Eigen::VectorXcd> pi;  ///< K entries of length N
};

/// Quadratic lower-bound coefficients of the own-rate term around the
/// current precoder: R_hat(w) = -a w^H f f^H w + 2 Re{b^H w} (+ const).
struct SurrogateCoeffs {
  Eigen::VectorXd a;                ///< per subcarrier, >= 0
  std::vector<Eigen::VectorXcd> b;  ///< per subcarrier, length N
};

struct PrecoderSolution {
  std::vector<Eigen::VectorXcd> w;
  double lambda = 0.0;  ///< power-constraint multiplier
  double power = 0.0;   ///< transmit power of the returned precoder
};

PrecoderPricing precoder_pricing(int q, const LinkTables& t,
                                 const std::vector<UserState>& states);

SurrogateCoeffs surrogate_coeffs(int q, const LinkTables& t,
                                 const std::vector<UserState>& states);

/// Maximizes the strongly concave precoder surrogate subject to the total
/// power budget. The stationary point is w(lambda) =
/// (1/2) (F + (tau/2 + lambda) I)^-1 v with v = pi + 2b + tau w_t; lambda is
/// zero when the unconstrained solution fits the budget and is otherwise
/// found by bisection on the monotone power curve. The block-diagonal,
/// rank-one structure of F is exploited so each subcarrier costs O(N).
/// Throws std::runtime_error if the bracket search fails (cannot happen for
/// a positive budget).
PrecoderSolution solve_precoder(const SurrogateCoeffs& coeffs,
                                const PrecoderPricing& pricing,
                                const std::vector<Eigen::VectorXcd>& w_t,
                                const std::vector<Eigen::VectorXcd>& f_own,
                                double tau, double power_budget);

}  // namespace bdris
