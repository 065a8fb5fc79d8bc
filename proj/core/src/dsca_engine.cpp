#include "bdris/dsca_engine.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include "bdris/capacitance_opt.hpp"
#include "bdris/precoder_opt.hpp"
#include "bdris/rng.hpp"
#include "bdris/switch_opt.hpp"

namespace bdris {

namespace {

// Keeps the initialization stream disjoint from channel synthesis.
constexpr std::uint64_t kInitStreamOffset = 0x9E3779B97F4A7C15ULL;

Eigen::MatrixXd random_permutation(int m, Rng& rng) {
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = m - 1; i > 0; --i) {
    std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) s(i, idx[i]) = 1.0;
  return s;
}

}  // namespace

long long cooperation_overhead(long long users, long long subcarriers,
                               long long bs_antennas, long long ris_elements) {
  return users *
         (subcarriers * bs_antennas + ris_elements * (ris_elements + 1));
}

double step_size(int t, double prev_alpha, double rho) {
  if (t <= 0) return 1.0;
  return prev_alpha / (1.0 + rho * prev_alpha);
}

std::vector<UserState> initialize(const Scenario& s, const ChannelSet& ch) {
  const auto freqs = s.subcarrier_freqs();
  Rng rng(s.seed + kInitStreamOffset);

  std::vector<UserState> states(s.users);
  for (int q = 0; q < s.users; ++q) {
    UserState& u = states[q];
    u.c.resize(s.ris_elements);
    for (int e = 0; e < s.ris_elements; ++e) {
      u.c[e] = rng.uniform(s.circuit.c_min_f, s.circuit.c_max_f);
    }
    u.sw = s.scheme.ris == RisMode::kBdRis
               ? random_permutation(s.ris_elements, rng)
               : Eigen::MatrixXd::Identity(s.ris_elements, s.ris_elements);
    refresh_reflection(u, freqs, s.circuit);
    u.w.assign(s.subcarriers, Eigen::VectorXcd::Zero(s.bs_antennas));
  }

  // Maximum ratio transmission against the own composite channel, scaled so
  // each user spends exactly its budget.
  const double scale = std::sqrt(s.power_w / s.subcarriers);
  for (int q = 0; q < s.users; ++q) {
    for (int k = 0; k < s.subcarriers; ++k) {
      Eigen::VectorXcd f =
          s.scheme.ris == RisMode::kNoRis
              ? ch.direct_at(q, q, k)
              : composite_channel(ch.direct_at(q, q, k),
                                  ch.ris_ue_at(q, q, k), states[q].sw,
                                  states[q].phi[k], ch.bs_ris_at(q, k));
      const double norm = f.norm();
      if (norm > 0.0) {
        states[q].w[k] = (scale / norm) * f;
      } else {
        states[q].w[k].setZero();
        states[q].w[k][0] = scale;
      }
    }
  }
  return states;
}

bool state_feasible(const UserState& u, const Scenario& s,
                    double power_slack) {
  if (u.transmit_power() > s.power_w + power_slack) return false;
  for (int e = 0; e < u.c.size(); ++e) {
    if (u.c[e] < s.circuit.c_min_f || u.c[e] > s.circuit.c_max_f) return false;
  }
  return is_permutation_matrix(u.sw);
}

DscaEngine::DscaEngine(const Scenario& s)
    : DscaEngine(s, synthesize_channels(s)) {}

DscaEngine::DscaEngine(Scenario s, ChannelSet ch)
    : scen_(std::move(s)), channels_(std::move(ch)) {
  scen_.validate();
  freqs_ = scen_.subcarrier_freqs();
  states_ = initialize(scen_, channels_);
  tables_ = build_link_tables(channels_, states_, scen_);
  current_rate_ = sum_rate(tables_);
  trace_.initial_sum_rate = current_rate_;
}

bool DscaEngine::step() {
  const int t = iteration_ + 1;
  const bool cooperate = scen_.scheme.pricing;
  const bool surfaces = scen_.scheme.ris != RisMode::kNoRis;
  const bool routed = scen_.scheme.ris == RisMode::kBdRis;
  const int n = scen_.bs_antennas, m = scen_.ris_elements,
            k_n = scen_.subcarriers;

  alpha_ = step_size(t, alpha_, scen_.rho);
  bus_.begin_iteration();

  // Jacobi sweep by default: every user reads the same snapshot and writes
  // only its own slot of `next`. Under the Gauss-Seidel option each user
  // instead reads the partially updated state of the users before it.
  std::vector<UserState> next = states_;
  LinkTables gs_tables;
  for (int q = 0; q < scen_.users; ++q) {
    const bool sequential = scen_.gauss_seidel && q > 0;
    if (sequential) gs_tables = build_link_tables(channels_, next, scen_);
    const std::vector<UserState>& src =
        scen_.gauss_seidel ? next : states_;
    const LinkTables& tab = sequential ? gs_tables : tables_;

    PricingBundle bundle;
    bundle.origin = q;
    bundle.iteration = t;
    bundle.precoder = Eigen::VectorXcd::Zero(k_n * n);
    bundle.capacitance = Eigen::VectorXd::Zero(m);
    bundle.selection = Eigen::MatrixXd::Zero(m, m);

    PrecoderPricing pricing;
    pricing.pi.assign(k_n, Eigen::VectorXcd::Zero(n));
    if (cooperate) {
      pricing = precoder_pricing(q, tab, src);
      for (int k = 0; k < k_n; ++k) {
        bundle.precoder.segment(k * n, n) = pricing.pi[k];
      }
      if (surfaces) {
        bundle.capacitance =
            capacitance_pricing(q, channels_, src, tab, scen_);
      }
      if (routed) {
        bundle.selection =
            switch_pricing(q, channels_, src, tab, scen_).real();
      }
    }
    bus_.publish(bundle);

    // Precoder best response and convex-combination update.
    const SurrogateCoeffs coeffs = surrogate_coeffs(q, tab, src);
    std::vector<Eigen::VectorXcd> f_own(k_n);
    for (int k = 0; k < k_n; ++k) f_own[k] = tab.composite(q, q, k);
    const PrecoderSolution sol = solve_precoder(
        coeffs, pricing, src[q].w, f_own, scen_.tau, scen_.power_w);
    for (int k = 0; k < k_n; ++k) {
      next[q].w[k] = src[q].w[k] + alpha_ * (sol.w[k] - src[q].w[k]);
    }

    if (surfaces) {
      const Eigen::VectorXd gamma =
          capacitance_grad_own(q, channels_, src, tab, scen_);
      const Eigen::VectorXd c_hat = update_capacitance(
          src[q].c, gamma, bundle.capacitance, scen_.tau, scen_.circuit);
      next[q].c = src[q].c + alpha_ * (c_hat - src[q].c);
      next[q].c = next[q].c.cwiseMax(scen_.circuit.c_min_f)
                      .cwiseMin(scen_.circuit.c_max_f);
      if (routed) {
        const Eigen::MatrixXcd gamma_s =
            switch_grad_own(q, channels_, src, tab, scen_);
        // Step size fixed to 1 for the selection matrix so the iterate
        // stays a permutation.
        next[q].sw = update_switch(
            gamma_s, bundle.selection.cast<std::complex<double>>(),
            src[q].sw, scen_.tau_s);
      }
      refresh_reflection(next[q], freqs_, scen_.circuit);
    }
  }

  states_ = std::move(next);
  tables_ = build_link_tables(channels_, states_, scen_);
  const double prev_rate = current_rate_;
  current_rate_ = sum_rate(tables_);
  iteration_ = t;

  trace_.sum_rate.push_back(current_rate_);
  Eigen::VectorXd per_user(scen_.users);
  for (int q = 0; q < scen_.users; ++q) {
    per_user[q] = user_rate(q, tables_) / scen_.subcarriers;
  }
  trace_.user_rates.push_back(per_user);
  trace_.alpha.push_back(alpha_);
  trace_.iterations = t;

  if (current_rate_ == 0.0) return prev_rate == 0.0;
  return std::abs((current_rate_ - prev_rate) / current_rate_) <= scen_.eps;
}

const RunTrace& DscaEngine::run() {
  const auto start = std::chrono::steady_clock::now();
  trace_.converged = false;
  while (iteration_ < scen_.t_max) {
    if (step()) {
      trace_.converged = true;
      break;
    }
  }
  trace_.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return trace_;
}

RunTrace run(const Scenario& s) {
  DscaEngine engine(s);
  return engine.run();
}

}  // namespace bdris
