#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "bdris/linkalg.hpp"
#include "bdris/scenario.hpp"

namespace bdris {

/// Per-iteration control-plane elements exchanged between the base stations:
/// Q bundles of KN precoder entries plus M + M*M surface entries each.
long long cooperation_overhead(long long users, long long subcarriers,
                               long long bs_antennas, long long ris_elements);

/// The message one user broadcasts per iteration: the pricing terms of its
/// precoder, capacitances and selection matrix. Contents are zero under the
/// non-cooperative benchmarks.
struct PricingBundle {
  Eigen::VectorXcd precoder;    ///< stacked K*N pricing vector
  Eigen::VectorXd capacitance;  ///< length M
  Eigen::MatrixXd selection;    ///< M x M (real part of the pricing matrix)
  int origin = -1;
  int iteration = 0;

  long long element_count() const {
    return static_cast<long long>(precoder.size()) + capacitance.size() +
           selection.size();
  }
};

/// In-process stand-in for the inter-BS control channel. Records how many
/// elements cross it so the exchange cost can be audited against the
/// analytic overhead count.
class MessageBus {
 public:
  void begin_iteration() { current_.clear(); }
  void publish(PricingBundle b) {
    elements_ += b.element_count();
    ++bundles_;
    current_.push_back(std::move(b));
  }
  const std::vector<PricingBundle>& current() const { return current_; }
  long long elements_published() const { return elements_; }
  long long bundles_published() const { return bundles_; }

 private:
  std::vector<PricingBundle> current_;
  long long elements_ = 0;
  long long bundles_ = 0;
};

/// Diminishing step-size rule alpha_t = alpha_{t-1} / (1 + rho alpha_{t-1}),
/// alpha_0 = 1. Satisfies the usual divergent-sum / convergent-square-sum
/// conditions for any rho > 0.
double step_size(int t, double prev_alpha, double rho);

struct RunTrace {
  std::vector<double> sum_rate;             ///< reported metric, includes 1/K
  std::vector<Eigen::VectorXd> user_rates;  ///< per user, includes 1/K
  std::vector<double> alpha;                ///< step size used per iteration
  double initial_sum_rate = 0.0;
  bool converged = false;
  int iterations = 0;
  double wall_seconds = 0.0;
};

/// Feasible starting point: capacitances uniform in the box, a random
/// permutation (identity unless the surface is switch-routed), and maximum
/// ratio transmission precoders scaled to use the full power budget.
/// Deterministic given Scenario::seed; uses a stream separate from channel
/// synthesis.
std::vector<UserState> initialize(const Scenario& s, const ChannelSet& ch);

/// Checks the three constraint families: transmit power within budget (plus
/// slack), capacitances inside the box, selection matrix a permutation.
bool state_feasible(const UserState& u, const Scenario& s,
                    double power_slack = 1e-9);

/// Distributed successive-concave-approximation driver. Each call to step()
/// performs one synchronized iteration: every user computes its pricing and
/// best responses from the same previous-iterate snapshot (Jacobi update),
/// bundles cross the message bus, and the convex-combination update is
/// applied with the current step size (step size 1 for the selection
/// matrices, which must remain permutations).
class DscaEngine {
 public:
  explicit DscaEngine(const Scenario& s);
  DscaEngine(Scenario s, ChannelSet ch);

  /// One iteration; returns true when the relative sum-rate change has
  /// fallen below Scenario::eps.
  bool step();

  /// Runs until the stop rule fires or t_max is reached.
  const RunTrace& run();

  const std::vector<UserState>& states() const { return states_; }
  const ChannelSet& channels() const { return channels_; }
  const Scenario& scenario() const { return scen_; }
  const MessageBus& bus() const { return bus_; }
  const RunTrace& trace() const { return trace_; }
  double current_sum_rate() const { return current_rate_; }
  int iteration() const { return iteration_; }

 private:
  Scenario scen_;
  ChannelSet channels_;
  std::vector<double> freqs_;
  std::vector<UserState> states_;
  LinkTables tables_;
  MessageBus bus_;
  RunTrace trace_;
  double alpha_ = 1.0;
  double current_rate_ = 0.0;
  int iteration_ = 0;
};

/// Convenience wrapper: synthesize channels, initialize, run.
RunTrace run(const Scenario& s);

}  // namespace bdris
