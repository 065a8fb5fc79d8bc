#include "bdris/capacitance_opt.hpp"

#include <complex>

#include "bdris/circuit.hpp"

namespace bdris {

namespace {

constexpr double kTwoInvLn2 = 2.8853900817779268149;  // 2/ln(2)
using cplx = std::complex<double>;

// d(conj(phi))/dC for every (subcarrier, element) of user q's surface.
std::vector<Eigen::VectorXcd> conj_grads(int q,
                                         const std::vector<UserState>& states,
                                         const Scenario& s) {
  const auto freqs = s.subcarrier_freqs();
  const int m = static_cast<int>(states[q].c.size());
  std::vector<Eigen::VectorXcd> d(freqs.size(), Eigen::VectorXcd(m));
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    for (int e = 0; e < m; ++e) {
      d[k][e] = reflection_conj_grad(freqs[k], states[q].c[e], s.circuit);
    }
  }
  return d;
}

// Accumulates, over subcarriers, the real part of
// dphi* .* vec_d(A^H + C^T Phi B^T) for the link from user q's surface to
// UE `dst`. The rank-one structure of A, B and C keeps this O(M) per
// subcarrier: with u = H w, b = S^T g, s = w^H h and
// t = sum_l phi_l u_l conj(b_l), the m-th diagonal entry is
// conj(u_m) b_m (conj(s) + t).
Eigen::VectorXd accumulate_diag(int q, int dst,
                                const Eigen::VectorXd& weights,
                                const ChannelSet& ch,
                                const std::vector<UserState>& states,
                                const std::vector<Eigen::VectorXcd>& dphi) {
  const UserState& me = states[q];
  const int m = static_cast<int>(me.c.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < ch.subcarriers; ++k) {
    if (weights[k] == 0.0) continue;
    const Eigen::VectorXcd u = ch.bs_ris_at(q, k) * me.w[k];
    const Eigen::VectorXcd b = me.sw.transpose() * ch.ris_ue_at(q, dst, k);
    const cplx s = me.w[k].dot(ch.direct_at(q, dst, k));
    const cplx t = b.dot(me.phi[k].cwiseProduct(u));
    const cplx outer = std::conj(s) + t;
    for (int e = 0; e < m; ++e) {
      out[e] += weights[k] *
                std::real(dphi[k][e] * std::conj(u[e]) * b[e] * outer);
    }
  }
  return out;
}

}  // namespace

Eigen::VectorXd capacitance_grad_own(int q, const ChannelSet& ch,
                                     const std::vector<UserState>& states,
                                     const LinkTables& t, const Scenario& s) {
  const auto dphi = conj_grads(q, states, s);
  Eigen::VectorXd weights(ch.subcarriers);
  for (int k = 0; k < ch.subcarriers; ++k) {
    weights[k] = 1.0 / ((1.0 + t.snr(q, k)) * t.mui(q, k));
  }
  return kTwoInvLn2 * accumulate_diag(q, q, weights, ch, states, dphi);
}

Eigen::VectorXd capacitance_pricing(int q, const ChannelSet& ch,
                                    const std::vector<UserState>& states,
                                    const LinkTables& t, const Scenario& s) {
  const auto dphi = conj_grads(q, states, s);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(states[q].c.size());
  Eigen::VectorXd weights(ch.subcarriers);
  for (int j = 0; j < ch.users; ++j) {
    if (j == q) continue;
    for (int k = 0; k < ch.subcarriers; ++k) {
      weights[k] = t.snr(j, k) / ((1.0 + t.snr(j, k)) * t.mui(j, k));
    }
    out += accumulate_diag(q, j, weights, ch, states, dphi);
  }
  return -kTwoInvLn2 * out;
}

Eigen::VectorXd update_capacitance(const Eigen::VectorXd& c_t,
                                   const Eigen::VectorXd& gamma,
                                   const Eigen::VectorXd& pricing, double tau,
                                   const CircuitParams& bounds) {
  // The subproblem runs in picofarads. Against farad-valued variables the
  // proximal term would be ~24 orders of magnitude below the rate gradients
  // and the update would always land on a box corner; in picofarads the
  // regularizer weight is commensurate with the other variable blocks.
  const Eigen::VectorXd beta =
      tau * (c_t / kPicofarad) + kPicofarad * (gamma + pricing);
  return (kPicofarad / tau * beta)
      .cwiseMax(bounds.c_min_f)
      .cwiseMin(bounds.c_max_f);
}

}  // namespace bdris
