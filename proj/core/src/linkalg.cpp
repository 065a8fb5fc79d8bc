#include "bdris/linkalg.hpp"

#include <cmath>
#include <stdexcept>

#include "bdris/circuit.hpp"

namespace bdris {

namespace {
constexpr double kInvLn2 = 1.4426950408889634074;  // 1/ln(2)
}

double UserState::transmit_power() const {
  double p = 0.0;
  for (const auto& wk : w) p += wk.squaredNorm();
  return p;
}

void refresh_reflection(UserState& u, const std::vector<double>& freqs,
                        const CircuitParams& p) {
  const int k = static_cast<int>(freqs.size());
  const int m = static_cast<int>(u.c.size());
  u.phi.assign(k, Eigen::VectorXcd(m));
  for (int bin = 0; bin < k; ++bin) {
    for (int e = 0; e < m; ++e) {
      u.phi[bin][e] = reflection(freqs[bin], u.c[e], p);
    }
  }
}

bool is_permutation_matrix(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) return false;
  const int m = static_cast<int>(s.rows());
  for (int i = 0; i < m; ++i) {
    int row_ones = 0, col_ones = 0;
    for (int j = 0; j < m; ++j) {
      const double r = s(i, j), c = s(j, i);
      if (r != 0.0 && r != 1.0) return false;
      row_ones += r == 1.0;
      col_ones += c == 1.0;
    }
    if (row_ones != 1 || col_ones != 1) return false;
  }
  return true;
}

Eigen::VectorXcd composite_channel(const Eigen::VectorXcd& h,
                                   const Eigen::VectorXcd& g,
                                   const Eigen::MatrixXd& s,
                                   const Eigen::VectorXcd& phi,
                                   const Eigen::MatrixXcd& big_h) {
  const auto m = g.size();
  const auto n = h.size();
  if (s.rows() != m || s.cols() != m || phi.size() != m ||
      big_h.rows() != m || big_h.cols() != n) {
    throw std::invalid_argument("composite_channel: dimension mismatch");
  }
  // f = h + H^H Phi^H S^T g, the Hermitian transpose of
  // f^H = h^H + g^H S Phi H.
  const Eigen::VectorXcd routed = s.transpose() * g;
  return h + big_h.adjoint() * phi.conjugate().cwiseProduct(routed);
}

namespace {

// Composite channel from BS/RIS pair `tx` to UE `rx`, honoring the scheme's
// surface mode. The reflecting surface is always the tx-side one.
Eigen::VectorXcd composite_for(int tx, int rx, int k, const ChannelSet& ch,
                               const std::vector<UserState>& states,
                               const Scenario& s) {
  if (s.scheme.ris == RisMode::kNoRis) return ch.direct_at(tx, rx, k);
  return composite_channel(ch.direct_at(tx, rx, k), ch.ris_ue_at(tx, rx, k),
                           states[tx].sw, states[tx].phi[k],
                           ch.bs_ris_at(tx, k));
}

}  // namespace

LinkTables build_link_tables(const ChannelSet& ch,
                             const std::vector<UserState>& states,
                             const Scenario& s) {
  LinkTables t;
  t.users = ch.users;
  t.subcarriers = ch.subcarriers;
  t.f.resize(static_cast<std::size_t>(ch.users) * ch.users * ch.subcarriers);
  t.gain.resize(t.f.size());
  t.mui.setZero(ch.users, ch.subcarriers);
  t.snr.setZero(ch.users, ch.subcarriers);

  for (int tx = 0; tx < ch.users; ++tx) {
    for (int rx = 0; rx < ch.users; ++rx) {
      for (int k = 0; k < ch.subcarriers; ++k) {
        const int idx = t.flat(tx, rx, k);
        t.f[idx] = composite_for(tx, rx, k, ch, states, s);
        t.gain[idx] = t.f[idx].dot(states[tx].w[k]);  // f^H w
      }
    }
  }
  for (int rx = 0; rx < ch.users; ++rx) {
    for (int k = 0; k < ch.subcarriers; ++k) {
      double mui = s.noise_w;
      for (int tx = 0; tx < ch.users; ++tx) {
        if (tx != rx) mui += std::norm(t.link_gain(tx, rx, k));
      }
      t.mui(rx, k) = mui;
      t.snr(rx, k) = std::norm(t.link_gain(rx, rx, k)) / mui;
    }
  }
  return t;
}

double mui_power(int q, int k, const ChannelSet& ch,
                 const std::vector<UserState>& states, const Scenario& s) {
  double mui = s.noise_w;
  for (int tx = 0; tx < ch.users; ++tx) {
    if (tx == q) continue;
    const Eigen::VectorXcd f = composite_for(tx, q, k, ch, states, s);
    mui += std::norm(f.dot(states[tx].w[k]));
  }
  return mui;
}

double sinr(int q, int k, const ChannelSet& ch,
            const std::vector<UserState>& states, const Scenario& s) {
  const Eigen::VectorXcd f = composite_for(q, q, k, ch, states, s);
  return std::norm(f.dot(states[q].w[k])) / mui_power(q, k, ch, states, s);
}

double user_rate(int q, const ChannelSet& ch,
                 const std::vector<UserState>& states, const Scenario& s) {
  double r = 0.0;
  for (int k = 0; k < ch.subcarriers; ++k) {
    r += kInvLn2 * std::log1p(sinr(q, k, ch, states, s));
  }
  return r;
}

double user_rate(int q, const LinkTables& t) {
  double r = 0.0;
  for (int k = 0; k < t.subcarriers; ++k) {
    r += kInvLn2 * std::log1p(t.snr(q, k));
  }
  return r;
}

double sum_rate(const ChannelSet& ch, const std::vector<UserState>& states,
                const Scenario& s) {
  double r = 0.0;
  for (int q = 0; q < ch.users; ++q) r += user_rate(q, ch, states, s);
  return r / ch.subcarriers;
}

double sum_rate(const LinkTables& t) {
  double r = 0.0;
  for (int q = 0; q < t.users; ++q) r += user_rate(q, t);
  return r / t.subcarriers;
}

}  // namespace bdris
