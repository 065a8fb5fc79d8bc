#include "bdris/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bdris/rng.hpp"

namespace bdris {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

// Reference layout for a 60 m square, scaled linearly with the width.
// One row per user: BS, RIS, UE.
constexpr double kRefWidth = 60.0;
constexpr double kRefBs[4][3] = {
    {0.0, 0.0, 5.0}, {60.0, 0.0, 5.0}, {0.0, 60.0, 5.0}, {60.0, 60.0, 5.0}};
constexpr double kRefRis[4][3] = {{27.75, 62.5, 3.0},
                                  {32.25, 62.5, 3.0},
                                  {27.75, 57.5, 3.0},
                                  {32.25, 57.5, 3.0}};
constexpr double kRefUe[4][3] = {
    {27.0, 60.0, 1.5}, {33.0, 60.0, 1.5}, {28.5, 60.0, 1.5}, {31.5, 60.0, 1.5}};

}  // namespace

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::string scheme_name(const Scheme& s) {
  std::string base;
  switch (s.ris) {
    case RisMode::kBdRis: base = "bd-ris"; break;
    case RisMode::kDiagRis: base = "diag-ris"; break;
    case RisMode::kNoRis: base = "no-ris"; break;
  }
  return s.pricing ? base : base + "-zp";
}

Scheme parse_scheme(const std::string& token) {
  Scheme s;
  std::string base = token;
  if (base.size() > 3 && base.substr(base.size() - 3) == "-zp") {
    s.pricing = false;
    base = base.substr(0, base.size() - 3);
  }
  if (base == "bd-ris") {
    s.ris = RisMode::kBdRis;
  } else if (base == "diag-ris") {
    s.ris = RisMode::kDiagRis;
  } else if (base == "no-ris") {
    s.ris = RisMode::kNoRis;
  } else {
    throw std::runtime_error("unknown scheme '" + token +
                             "' (expected bd-ris|diag-ris|no-ris, optional "
                             "-zp suffix)");
  }
  return s;
}

Geometry default_geometry(int users, double square_width_m) {
  if (users < 1 || users > 4) {
    throw std::invalid_argument("default_geometry: supported user counts are "
                                "1..4, got " +
                                std::to_string(users));
  }
  if (!(square_width_m > 0.0)) {
    throw std::invalid_argument("default_geometry: width must be positive");
  }
  const double scale = square_width_m / kRefWidth;
  Geometry g;
  for (int q = 0; q < users; ++q) {
    g.bs.push_back({kRefBs[q][0] * scale, kRefBs[q][1] * scale, kRefBs[q][2]});
    g.ris.push_back(
        {kRefRis[q][0] * scale, kRefRis[q][1] * scale, kRefRis[q][2]});
    g.ue.push_back({kRefUe[q][0] * scale, kRefUe[q][1] * scale, kRefUe[q][2]});
  }
  return g;
}

std::vector<double> subcarrier_frequencies(double fc_hz, double bw_hz, int k) {
  if (k < 1) throw std::invalid_argument("subcarrier_frequencies: K >= 1");
  std::vector<double> f(k);
  const double step = bw_hz / k;
  for (int i = 1; i <= k; ++i) {
    f[i - 1] = fc_hz + (i - 0.5 * (k + 1)) * step;
  }
  return f;
}

double pathloss(double distance_m, double alpha, double fc_hz) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("pathloss: distance must be positive, got " +
                            std::to_string(distance_m));
  }
  const double lambda = kSpeedOfLight / fc_hz;
  const double pl0 = (lambda / (4.0 * M_PI)) * (lambda / (4.0 * M_PI));
  return pl0 * std::pow(distance_m, -alpha);
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

void Scenario::validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("scenario: " + msg);
  };
  if (users < 1) fail("Q must be >= 1");
  if (bs_antennas < 1) fail("N must be >= 1");
  if (ris_elements < 1) fail("M must be >= 1");
  if (delay_taps < 1) fail("D must be >= 1");
  if (subcarriers < delay_taps) fail("K must be >= D");
  if (!(bw_hz > 0.0)) fail("BW must be > 0");
  if (!(fc_hz > 0.0)) fail("fc must be > 0");
  if (!(power_w > 0.0)) fail("P must be > 0");
  if (!(noise_w > 0.0)) fail("sigma2 must be > 0");
  if (!(tau > 0.0)) fail("tau must be > 0");
  if (!(tau_s > 0.0)) fail("tau_s must be > 0");
  if (!(eps > 0.0)) fail("eps must be > 0");
  if (!(rho > 0.0)) fail("rho must be > 0");
  if (t_max < 1) fail("t_max must be >= 1");
  circuit.validate();

  const auto users_sz = static_cast<std::size_t>(users);
  if (geometry.bs.size() != users_sz || geometry.ris.size() != users_sz ||
      geometry.ue.size() != users_sz) {
    fail("geometry must list one BS, RIS and UE position per user");
  }
  std::vector<const Vec3*> nodes;
  for (const auto& v : geometry.bs) nodes.push_back(&v);
  for (const auto& v : geometry.ris) nodes.push_back(&v);
  for (const auto& v : geometry.ue) nodes.push_back(&v);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      if (!(distance(*nodes[a], *nodes[b]) > 0.0)) {
        fail("node positions must have strictly positive pairwise distances");
      }
    }
  }
}

std::vector<double> Scenario::subcarrier_freqs() const {
  return subcarrier_frequencies(fc_hz, bw_hz, subcarriers);
}

Vec3 bs_antenna_position(const Scenario& s, int q, int antenna) {
  const double lambda = kSpeedOfLight / s.fc_hz;
  const double offset =
      (antenna - 0.5 * (s.bs_antennas - 1)) * 0.5 * lambda;
  Vec3 p = s.geometry.bs[q];
  p.x += offset;
  return p;
}

Vec3 ris_element_position(const Scenario& s, int q, int element) {
  const double lambda = kSpeedOfLight / s.fc_hz;
  const int cols = static_cast<int>(std::ceil(std::sqrt(s.ris_elements)));
  const int rows = (s.ris_elements + cols - 1) / cols;
  const int row = element / cols;
  const int col = element % cols;
  Vec3 p = s.geometry.ris[q];
  p.x += (col - 0.5 * (cols - 1)) * 0.5 * lambda;
  p.z += (row - 0.5 * (rows - 1)) * 0.5 * lambda;
  return p;
}

namespace {

// One scalar wideband link: D Gaussian taps of variance 1/D, zero-padded to
// K, transformed to the per-subcarrier responses, then scaled by
// sqrt(pathloss). The subcarrier response is the plain K-point DFT of the
// taps - the eigenvalue spectrum obtained when the block-circulant channel
// matrix is diagonalized by the normalized DFT matrices - so the average
// per-subcarrier power equals the total tap power.
void fill_link(Rng& rng, int taps, int k, double pl,
               Eigen::Ref<Eigen::VectorXcd> out) {
  std::vector<std::complex<double>> tap(taps);
  for (int d = 0; d < taps; ++d) {
    tap[d] = rng.complex_gaussian(1.0 / taps);
  }
  const double amp = std::sqrt(pl);
  for (int bin = 0; bin < k; ++bin) {
    std::complex<double> acc{0.0, 0.0};
    for (int d = 0; d < taps; ++d) {
      const double ang = -2.0 * M_PI * bin * d / k;
      acc += tap[d] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[bin] = amp * acc;
  }
}

}  // namespace

ChannelSet synthesize_channels(const Scenario& s) {
  s.validate();
  const int q_n = s.users, n = s.bs_antennas, m = s.ris_elements,
            k = s.subcarriers;
  Rng rng(s.seed);

  ChannelSet ch;
  ch.users = q_n;
  ch.bs_antennas = n;
  ch.ris_elements = m;
  ch.subcarriers = k;
  ch.direct.assign(static_cast<std::size_t>(q_n) * q_n,
                   std::vector<Eigen::VectorXcd>(k, Eigen::VectorXcd(n)));
  ch.bs_ris.assign(q_n,
                   std::vector<Eigen::MatrixXcd>(k, Eigen::MatrixXcd(m, n)));
  ch.ris_ue.assign(static_cast<std::size_t>(q_n) * q_n,
                   std::vector<Eigen::VectorXcd>(k, Eigen::VectorXcd(m)));

  Eigen::VectorXcd freq(k);

  // Draw order is fixed: direct links, then BS-RIS, then RIS-UE, each
  // scanned tx-major. Changing it breaks seed reproducibility.
  for (int tx = 0; tx < q_n; ++tx) {
    for (int rx = 0; rx < q_n; ++rx) {
      for (int a = 0; a < n; ++a) {
        const double d =
            distance(bs_antenna_position(s, tx, a), s.geometry.ue[rx]);
        fill_link(rng, s.delay_taps, k, pathloss(d, s.alpha_bs_ue, s.fc_hz),
                  freq);
        for (int bin = 0; bin < k; ++bin) {
          ch.direct[tx * q_n + rx][bin][a] = freq[bin];
        }
      }
    }
  }
  for (int q = 0; q < q_n; ++q) {
    for (int e = 0; e < m; ++e) {
      for (int a = 0; a < n; ++a) {
        const double d = distance(bs_antenna_position(s, q, a),
                                  ris_element_position(s, q, e));
        fill_link(rng, s.delay_taps, k, pathloss(d, s.alpha_bs_ris, s.fc_hz),
                  freq);
        for (int bin = 0; bin < k; ++bin) {
          ch.bs_ris[q][bin](e, a) = freq[bin];
        }
      }
    }
  }
  for (int tx = 0; tx < q_n; ++tx) {
    for (int rx = 0; rx < q_n; ++rx) {
      for (int e = 0; e < m; ++e) {
        const double d =
            distance(ris_element_position(s, tx, e), s.geometry.ue[rx]);
        fill_link(rng, s.delay_taps, k, pathloss(d, s.alpha_ris_ue, s.fc_hz),
                  freq);
        for (int bin = 0; bin < k; ++bin) {
          ch.ris_ue[tx * q_n + rx][bin][e] = freq[bin];
        }
      }
    }
  }
  return ch;
}

}  // namespace bdris
