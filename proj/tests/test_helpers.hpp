#pragma once

// Shared fixture builders for the optimizer test suites.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "bdris/linkalg.hpp"
#include "bdris/rng.hpp"
#include "bdris/scenario.hpp"

namespace bdris::test {

inline Eigen::VectorXcd random_cvec(int n, Rng& rng, double scale = 1.0) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.complex_gaussian(1.0);
  return v;
}

inline Eigen::MatrixXcd random_cmat(int r, int c, Rng& rng,
                                    double scale = 1.0) {
  Eigen::MatrixXcd m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = scale * rng.complex_gaussian(1.0);
  }
  return m;
}

inline Eigen::MatrixXd permutation_from(const std::vector<int>& idx) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) p(i, idx[i]) = 1.0;
  return p;
}

struct Toy {
  Scenario s;
  ChannelSet ch;
  std::vector<UserState> states;
};

/// Random instance with explicit O(1)-scale channels; convenient for
/// optimizer unit tests where physical pathloss scales are irrelevant.
inline Toy make_toy(int users, int n, int m, int k, std::uint64_t seed,
                    RisMode mode = RisMode::kBdRis, double noise = 1e-2) {
  Toy t;
  t.s.users = users;
  t.s.bs_antennas = n;
  t.s.ris_elements = m;
  t.s.subcarriers = k;
  t.s.delay_taps = 1;
  t.s.power_w = 1.0;
  t.s.noise_w = noise;
  t.s.scheme.ris = mode;
  t.s.geometry = default_geometry(std::min(users, 4), 60.0);

  Rng rng(seed);
  t.ch.users = users;
  t.ch.bs_antennas = n;
  t.ch.ris_elements = m;
  t.ch.subcarriers = k;
  t.ch.direct.assign(users * users,
                     std::vector<Eigen::VectorXcd>(k, Eigen::VectorXcd(n)));
  t.ch.bs_ris.assign(users,
                     std::vector<Eigen::MatrixXcd>(k, Eigen::MatrixXcd(m, n)));
  t.ch.ris_ue.assign(users * users,
                     std::vector<Eigen::VectorXcd>(k, Eigen::VectorXcd(m)));
  for (int tx = 0; tx < users; ++tx) {
    for (int rx = 0; rx < users; ++rx) {
      for (int bin = 0; bin < k; ++bin) {
        t.ch.direct[tx * users + rx][bin] = random_cvec(n, rng);
        t.ch.ris_ue[tx * users + rx][bin] = random_cvec(m, rng, 0.5);
      }
    }
  }
  for (int q = 0; q < users; ++q) {
    for (int bin = 0; bin < k; ++bin) {
      t.ch.bs_ris[q][bin] = random_cmat(m, n, rng, 0.5);
    }
  }

  t.states.resize(users);
  const auto freqs = t.s.subcarrier_freqs();
  for (int q = 0; q < users; ++q) {
    t.states[q].c.resize(m);
    for (int e = 0; e < m; ++e) {
      t.states[q].c[e] = rng.uniform(t.s.circuit.c_min_f, t.s.circuit.c_max_f);
    }
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = (i + q) % m;
    t.states[q].sw = permutation_from(idx);
    refresh_reflection(t.states[q], freqs, t.s.circuit);
    t.states[q].w.assign(k, Eigen::VectorXcd());
    for (int bin = 0; bin < k; ++bin) {
      t.states[q].w[bin] = random_cvec(n, rng, 0.3);
    }
  }
  return t;
}

/// Sum of every user's rate except q's (no 1/K), the quantity priced by the
/// cross-gradient terms.
inline double others_rate(int q, const Toy& t,
                          const std::vector<UserState>& states) {
  double r = 0.0;
  for (int j = 0; j < t.s.users; ++j) {
    if (j != q) r += user_rate(j, t.ch, states, t.s);
  }
  return r;
}

}  // namespace bdris::test
