#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bdris/circuit.hpp"

namespace bdris {

/// Surface architecture of the simulated deployment.
enum class RisMode {
  kBdRis,   ///< switch-routed diagonal reflection matrix (S * Phi)
  kDiagRis, ///< conventional diagonal surface (S = I, fixed)
  kNoRis    ///< direct links only
};

/// RIS architecture plus the cooperation flavor. With pricing disabled each
/// base station optimizes selfishly (the "Pi = 0" benchmarks).
struct Scheme {
  RisMode ris = RisMode::kBdRis;
  bool pricing = true;
};

/// Canonical scheme token, e.g. "bd-ris", "diag-ris-zp".
std::string scheme_name(const Scheme& s);
/// Inverse of scheme_name(); throws std::runtime_error on unknown token.
Scheme parse_scheme(const std::string& token);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

/// Node placement of one experiment: one BS, one RIS and one UE per user.
struct Geometry {
  std::vector<Vec3> bs;
  std::vector<Vec3> ris;
  std::vector<Vec3> ue;
};

/// Reference deployment for up to four users: BSs on the corners of a square
/// of the given width, UEs on a line near the far edge, one RIS next to each
/// UE. Coordinates scale linearly with the square width (heights fixed).
/// Throws std::invalid_argument for unsupported user counts.
Geometry default_geometry(int users, double square_width_m);

/// Full experiment configuration. All internal values are SI (Hz, W, m, F);
/// dBm conversions happen at the config-file boundary only.
struct Scenario {
  Scheme scheme;

  int users = 0;          ///< number of BS-RIS-UE triplets
  int bs_antennas = 0;    ///< antennas per BS
  int ris_elements = 0;   ///< elements per RIS
  int subcarriers = 0;    ///< OFDM subcarriers
  int delay_taps = 0;     ///< time-domain taps per channel entry
  int cyclic_prefix = 16; ///< recorded but not used by the rate expression

  double fc_hz = 3.5e9;
  double bw_hz = 1e8;
  double power_w = 0.0;   ///< per-BS transmit budget
  double noise_w = 0.0;   ///< receiver noise power

  double alpha_bs_ue = 3.7;
  double alpha_bs_ris = 2.6;
  double alpha_ris_ue = 2.2;

  double square_width_m = 60.0;
  Geometry geometry;      ///< populated from default_geometry() unless overridden

  CircuitParams circuit;

  double tau = 1.85;      ///< surrogate regularization weight
  double tau_s = 0.2;     ///< proximal weight of the selection-matrix step
  double eps = 1e-3;      ///< relative sum-rate change stop threshold
  double rho = 1.0;       ///< step-size decay factor
  int t_max = 500;        ///< iteration safety cap
  bool gauss_seidel = false;  ///< sequential instead of parallel user updates
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on any violated invariant (positive sizes,
  /// K >= D, positive powers, strictly positive pairwise node distances, ...).
  void validate() const;

  std::vector<double> subcarrier_freqs() const;
};

/// Centers of the K subcarriers: f_k = fc + (k - (K+1)/2) * BW / K for
/// k = 1..K. Strictly increasing and symmetric about fc.
std::vector<double> subcarrier_frequencies(double fc_hz, double bw_hz, int k);

/// Distance-dependent linear power gain (lambda_c/4pi)^2 * d^(-alpha) with a
/// 1 m reference distance. Throws std::domain_error on d <= 0.
double pathloss(double distance_m, double alpha, double fc_hz);

/// Frequency-domain channels of every link on every subcarrier.
///
/// Index convention: tx is the owning BS (or RIS) index, rx the UE index,
/// k the subcarrier. Only same-index BS->RIS links exist; reflections via an
/// unintended surface are not modeled.
struct ChannelSet {
  int users = 0;
  int bs_antennas = 0;
  int ris_elements = 0;
  int subcarriers = 0;

  /// BS tx -> UE rx, length-N vectors, indexed [tx*users+rx][k].
  std::vector<std::vector<Eigen::VectorXcd>> direct;
  /// BS q -> RIS q, M x N matrices, indexed [q][k].
  std::vector<std::vector<Eigen::MatrixXcd>> bs_ris;
  /// RIS tx -> UE rx, length-M vectors, indexed [tx*users+rx][k].
  std::vector<std::vector<Eigen::VectorXcd>> ris_ue;

  const Eigen::VectorXcd& direct_at(int tx, int rx, int k) const {
    return direct[tx * users + rx][k];
  }
  const Eigen::MatrixXcd& bs_ris_at(int q, int k) const {
    return bs_ris[q][k];
  }
  const Eigen::VectorXcd& ris_ue_at(int tx, int rx, int k) const {
    return ris_ue[tx * users + rx][k];
  }
};

/// Draws D i.i.d. complex Gaussian taps per scalar channel entry (uniform
/// power profile, unit total average power), zero-pads to K and takes the
/// K-point DFT along the delay axis; the result is the eigenvalue spectrum
/// of the block-circulant channel matrix, so every subcarrier carries the
/// full average link power. Every entry is scaled by the square root of the
/// pathloss of its element pair. Deterministic given Scenario::seed.
ChannelSet synthesize_channels(const Scenario& s);

/// Per-element positions used for the pathloss distances: a ULA along the
/// x-axis at each BS and a near-square UPA on the xz-plane at each RIS, both
/// with half-wavelength spacing.
Vec3 bs_antenna_position(const Scenario& s, int q, int antenna);
Vec3 ris_element_position(const Scenario& s, int q, int element);

// --- plain-text key/value configuration -----------------------------------

/// Parses a config from text. One `key = value` pair per line, `#` starts a
/// comment, positions are flat x y z triplets. Required keys: scheme's
/// defaults apply but Q, N, M, K, D must be present. Unknown or malformed
/// keys raise std::runtime_error naming the key.
Scenario parse_scenario(const std::string& text);

/// Loads a config file; throws std::runtime_error if unreadable.
Scenario load_scenario(const std::string& path);

/// Canonical round-trippable form of a scenario: every key written
/// explicitly in a fixed order with full precision.
std::string canonical_config(const Scenario& s);

void save_scenario(const Scenario& s, const std::string& path);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace bdris
