#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "bdris/scenario.hpp"

namespace bdris {

/// One user's optimization variables plus the cached per-subcarrier
/// reflection vector of its surface.
///
/// `sw` holds the element-routing selection matrix. During normal operation
/// it is a permutation; gradient probes may evaluate the rate at relaxed
/// (doubly stochastic) points, so it is stored as a plain real matrix and
/// validated only where the algorithm requires a permutation.
struct UserState {
  std::vector<Eigen::VectorXcd> w;    ///< precoder per subcarrier, length N
  Eigen::VectorXd c;                  ///< element capacitances, farads
  Eigen::MatrixXd sw;                 ///< M x M selection matrix
  std::vector<Eigen::VectorXcd> phi;  ///< reflection per subcarrier, length M

  double transmit_power() const;
};

/// Recomputes the phi cache from the capacitances. Must be called after any
/// change to `c`.
void refresh_reflection(UserState& u, const std::vector<double>& freqs,
                        const CircuitParams& p);

bool is_permutation_matrix(const Eigen::MatrixXd& s);

/// End-to-end receive channel f with f^H = h^H + g^H S diag(phi) H.
/// Throws std::invalid_argument on inconsistent dimensions.
Eigen::VectorXcd composite_channel(const Eigen::VectorXcd& h,
                                   const Eigen::VectorXcd& g,
                                   const Eigen::MatrixXd& s,
                                   const Eigen::VectorXcd& phi,
                                   const Eigen::MatrixXcd& big_h);

/// Per-iteration cache of every composite channel, link gain f^H w, and the
/// per-user SINR / interference-plus-noise tables. Built once from a state
/// snapshot and then shared read-only.
struct LinkTables {
  int users = 0;
  int subcarriers = 0;
  std::vector<Eigen::VectorXcd> f;           ///< composite, flat(tx, rx, k)
  std::vector<std::complex<double>> gain;    ///< f^H w_tx, flat(tx, rx, k)
  Eigen::MatrixXd mui;                       ///< users x K
  Eigen::MatrixXd snr;                       ///< users x K

  int flat(int tx, int rx, int k) const {
    return (tx * users + rx) * subcarriers + k;
  }
  const Eigen::VectorXcd& composite(int tx, int rx, int k) const {
    return f[flat(tx, rx, k)];
  }
  std::complex<double> link_gain(int tx, int rx, int k) const {
    return gain[flat(tx, rx, k)];
  }
};

LinkTables build_link_tables(const ChannelSet& ch,
                             const std::vector<UserState>& states,
                             const Scenario& s);

/// Interference-plus-noise power sigma^2 + sum_{j != q} |f_jq^H w_j|^2 at
/// UE q on subcarrier k.
double mui_power(int q, int k, const ChannelSet& ch,
                 const std::vector<UserState>& states, const Scenario& s);

double sinr(int q, int k, const ChannelSet& ch,
            const std::vector<UserState>& states, const Scenario& s);

/// Rate of user q summed over subcarriers, without the 1/K prefactor; this
/// is the quantity the optimizer works with internally.
double user_rate(int q, const ChannelSet& ch,
                 const std::vector<UserState>& states, const Scenario& s);
double user_rate(int q, const LinkTables& t);

/// Reported metric: (1/K) * sum_q sum_k log2(1 + SINR).
double sum_rate(const ChannelSet& ch, const std::vector<UserState>& states,
                const Scenario& s);
double sum_rate(const LinkTables& t);

}  // namespace bdris
