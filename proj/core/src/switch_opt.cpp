#include "bdris/switch_opt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bdris {

namespace {
constexpr double kTwoInvLn2 = 2.8853900817779268149;  // 2/ln(2)
using cplx = std::complex<double>;

// The per-subcarrier gradient term (F + K S^T G)^T collapses to the rank-one
// matrix (s + kappa) conj(g) (Phi u)^T, with u = H w, s = w^H h and
// kappa = (Phi u)^H S^T g. `dst` selects the receiving UE.
void add_rank_one_term(int q, int dst, double weight, int k,
                       const ChannelSet& ch,
                       const std::vector<UserState>& states,
                       Eigen::MatrixXcd& acc) {
  const UserState& me = states[q];
  const Eigen::VectorXcd phiu =
      me.phi[k].cwiseProduct(ch.bs_ris_at(q, k) * me.w[k]);
  const Eigen::VectorXcd& g = ch.ris_ue_at(q, dst, k);
  const cplx s = me.w[k].dot(ch.direct_at(q, dst, k));
  const cplx kappa = phiu.dot(me.sw.transpose() * g);
  acc.noalias() += (weight * (s + kappa)) * (g.conjugate() * phiu.transpose());
}

}  // namespace

Eigen::MatrixXcd switch_grad_own(int q, const ChannelSet& ch,
                                 const std::vector<UserState>& states,
                                 const LinkTables& t, const Scenario& s) {
  (void)s;
  const int m = static_cast<int>(states[q].c.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (int k = 0; k < ch.subcarriers; ++k) {
    const double weight =
        kTwoInvLn2 / ((1.0 + t.snr(q, k)) * t.mui(q, k));
    add_rank_one_term(q, q, weight, k, ch, states, out);
  }
  return out;
}

Eigen::MatrixXcd switch_pricing(int q, const ChannelSet& ch,
                                const std::vector<UserState>& states,
                                const LinkTables& t, const Scenario& s) {
  (void)s;
  const int m = static_cast<int>(states[q].c.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < ch.users; ++j) {
    if (j == q) continue;
    for (int k = 0; k < ch.subcarriers; ++k) {
      const double weight = -kTwoInvLn2 * t.snr(j, k) /
                            ((1.0 + t.snr(j, k)) * t.mui(j, k));
      add_rank_one_term(q, j, weight, k, ch, states, out);
    }
  }
  return out;
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1) {
    throw std::invalid_argument("min_cost_assignment: square matrix required");
  }
  if (!cost.allFinite()) {
    throw std::invalid_argument("min_cost_assignment: costs must be finite");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Kuhn-Munkres with row/column potentials and shortest augmenting paths;
  // arrays are 1-based with column 0 as the virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

Eigen::MatrixXd solve_lsap_max(const Eigen::MatrixXd& score) {
  const auto assignment = min_cost_assignment(-score);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(score.rows(), score.cols());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    s(static_cast<int>(i), assignment[i]) = 1.0;
  }
  return s;
}

Eigen::MatrixXd update_switch(const Eigen::MatrixXcd& gamma,
                              const Eigen::MatrixXcd& pi,
                              const Eigen::MatrixXd& s_t, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("update_switch: tau must be positive");
  }
  Eigen::MatrixXd score = (gamma + pi).real() + tau * s_t;
  // Nudge exact ties toward the previous iterate.
  const double tie = 1e-9 * (1.0 + score.cwiseAbs().maxCoeff());
  score += tie * s_t;
  return solve_lsap_max(score);
}

}  // namespace bdris
