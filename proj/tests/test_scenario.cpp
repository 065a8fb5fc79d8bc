#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "bdris/rng.hpp"
#include "bdris/scenario.hpp"

using namespace bdris;
using cplx = std::complex<double>;

namespace {

Scenario desk_scenario() {
  Scenario s;
  s.users = 2;
  s.bs_antennas = 2;
  s.ris_elements = 4;
  s.subcarriers = 8;
  s.delay_taps = 4;
  s.power_w = dbm_to_watt(25.0);
  s.noise_w = dbm_to_watt(-90.0);
  s.geometry = default_geometry(s.users, 60.0);
  return s;
}

// Recovers the delay taps of one scalar link from its subcarrier response
// (inverse of the circulant-eigenvalue construction).
std::vector<cplx> recover_taps(const std::vector<cplx>& freq) {
  const int k = static_cast<int>(freq.size());
  std::vector<cplx> taps(k);
  for (int d = 0; d < k; ++d) {
    cplx acc{0.0, 0.0};
    for (int bin = 0; bin < k; ++bin) {
      const double ang = 2.0 * M_PI * bin * d / k;
      acc += freq[bin] * cplx(std::cos(ang), std::sin(ang));
    }
    taps[d] = acc / static_cast<double>(k);
  }
  return taps;
}

}  // namespace

TEST_CASE("subcarrier grid") {
  const auto f = subcarrier_frequencies(3.5e9, 1e8, 64);
  REQUIRE(f.size() == 64);
  CHECK(f[0] == doctest::Approx(3.450781250e9).epsilon(1e-12));
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] > f[i - 1]);
  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= f.size();
  CHECK(std::abs(mean - 3.5e9) < 1e-6);

  const auto single = subcarrier_frequencies(3.5e9, 1e8, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 3.5e9);
}

TEST_CASE("pathloss model") {
  const double lambda = 299792458.0 / 3.5e9;
  const double pl0 = (lambda / (4.0 * M_PI)) * (lambda / (4.0 * M_PI));
  CHECK(pathloss(1.0, 3.7, 3.5e9) == doctest::Approx(pl0).epsilon(1e-12));
  // frozen from the scratch oracle: pl0 * 10^-2.2
  CHECK(pathloss(10.0, 2.2, 3.5e9) ==
        doctest::Approx(2.931470911507286e-07).epsilon(1e-12));
  CHECK_THROWS_AS(pathloss(0.0, 2.2, 3.5e9), std::domain_error);
  CHECK_THROWS_AS(pathloss(-5.0, 2.2, 3.5e9), std::domain_error);
}

TEST_CASE("reference geometry") {
  const Geometry g = default_geometry(4, 60.0);
  CHECK(g.bs[0].x == 0.0);
  CHECK(g.bs[0].z == 5.0);
  CHECK(g.bs[1].x == 60.0);
  CHECK(g.ue[0].x == 27.0);
  CHECK(g.ue[0].y == 60.0);
  CHECK(g.ue[0].z == 1.5);
  CHECK(g.ris[0].x == 27.75);
  CHECK(g.ris[0].y == 62.5);
  CHECK(g.ris[0].z == 3.0);

  const Geometry one = default_geometry(1, 60.0);
  CHECK(one.bs.size() == 1);
  CHECK(one.ue[0].x == 27.0);

  for (int q = 0; q < 4; ++q) {
    for (int j = 0; j < 4; ++j) {
      CHECK(distance(g.bs[q], g.ue[j]) > 0.0);
    }
  }
  CHECK_THROWS_AS(default_geometry(5, 60.0), std::invalid_argument);
  CHECK_THROWS_AS(default_geometry(0, 60.0), std::invalid_argument);
}

TEST_CASE("single tap means flat fading") {
  Scenario s = desk_scenario();
  s.delay_taps = 1;
  const ChannelSet ch = synthesize_channels(s);
  for (int tx = 0; tx < s.users; ++tx) {
    for (int rx = 0; rx < s.users; ++rx) {
      for (int k = 1; k < s.subcarriers; ++k) {
        CHECK((ch.direct_at(tx, rx, k) - ch.direct_at(tx, rx, 0)).norm() <
              1e-12 * ch.direct_at(tx, rx, 0).norm());
      }
    }
  }
}

TEST_CASE("subcarrier response is the tap spectrum") {
  Scenario s = desk_scenario();
  const ChannelSet ch = synthesize_channels(s);
  std::vector<cplx> freq(s.subcarriers);
  for (int k = 0; k < s.subcarriers; ++k) freq[k] = ch.direct_at(0, 1, k)[0];
  const auto taps = recover_taps(freq);
  // zero padding beyond D taps
  for (int d = s.delay_taps; d < s.subcarriers; ++d) {
    CHECK(std::abs(taps[d]) < 1e-12 * std::abs(taps[0]));
  }
  // Parseval for the circulant-eigenvalue convention
  double e_freq = 0.0, e_taps = 0.0;
  for (const cplx& v : freq) e_freq += std::norm(v);
  for (const cplx& v : taps) e_taps += std::norm(v);
  CHECK(e_freq ==
        doctest::Approx(s.subcarriers * e_taps).epsilon(1e-9));
}

TEST_CASE("seed determinism") {
  const Scenario s = desk_scenario();
  const ChannelSet a = synthesize_channels(s);
  const ChannelSet b = synthesize_channels(s);
  CHECK(a.direct_at(1, 0, 3)[1] == b.direct_at(1, 0, 3)[1]);
  CHECK(a.bs_ris_at(0, 2)(3, 1) == b.bs_ris_at(0, 2)(3, 1));
  CHECK(a.ris_ue_at(0, 1, 5)[2] == b.ris_ue_at(0, 1, 5)[2]);

  Scenario other = s;
  other.seed = s.seed + 1;
  const ChannelSet c = synthesize_channels(other);
  CHECK(std::abs(a.direct_at(0, 0, 0)[0] - c.direct_at(0, 0, 0)[0]) > 0.0);
}

TEST_CASE("channel dimensions") {
  Scenario s = desk_scenario();
  s.users = 2;
  s.bs_antennas = 3;
  s.ris_elements = 5;
  s.subcarriers = 8;
  const ChannelSet ch = synthesize_channels(s);
  CHECK(ch.direct.size() == 4);
  CHECK(ch.direct_at(1, 0, 7).size() == 3);
  CHECK(ch.bs_ris_at(1, 0).rows() == 5);
  CHECK(ch.bs_ris_at(1, 0).cols() == 3);
  CHECK(ch.ris_ue_at(0, 1, 0).size() == 5);
}

TEST_CASE("tap statistics stay centered") {
  Rng rng(123);
  double re = 0.0, im = 0.0, power = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const cplx z = rng.complex_gaussian(1.0);
    re += z.real();
    im += z.imag();
    power += std::norm(z);
  }
  const double sd = std::sqrt(0.5);  // per-component std for unit power
  CHECK(std::abs(re / n) < 3.0 * sd / std::sqrt(double(n)));
  CHECK(std::abs(im / n) < 3.0 * sd / std::sqrt(double(n)));
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("scheme tokens") {
  CHECK(scheme_name(parse_scheme("bd-ris")) == "bd-ris");
  CHECK(scheme_name(parse_scheme("diag-ris-zp")) == "diag-ris-zp");
  CHECK(parse_scheme("no-ris").ris == RisMode::kNoRis);
  CHECK(parse_scheme("bd-ris-zp").pricing == false);
  CHECK_THROWS_AS(parse_scheme("bd"), std::runtime_error);
}

TEST_CASE("config parsing and canonical round trip") {
  const std::string text = R"(
# fixture
Q = 2
N = 2
M = 4
K = 8
D = 4            # taps
scheme = diag-ris-zp
p_dbm = 20
seed = 42
)";
  const Scenario s = parse_scenario(text);
  CHECK(s.users == 2);
  CHECK(s.subcarriers == 8);
  CHECK(s.scheme.ris == RisMode::kDiagRis);
  CHECK(s.scheme.pricing == false);
  CHECK(s.power_w == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(s.seed == 42);
  // zero-pricing default regularizer
  CHECK(s.tau == 1.25);

  const std::string canon = canonical_config(s);
  const Scenario again = parse_scenario(canon);
  CHECK(canonical_config(again) == canon);

  const Scenario gs = parse_scenario(
      "Q = 2\nN = 2\nM = 4\nK = 8\nD = 4\nupdate = gauss-seidel\n");
  CHECK(gs.gauss_seidel);
  CHECK_THROWS_WITH_AS(
      parse_scenario("Q = 2\nN = 2\nM = 4\nK = 8\nD = 4\nupdate = x\n"),
      doctest::Contains("'update'"), std::runtime_error);
}

TEST_CASE("config errors name the offending key") {
  CHECK_THROWS_WITH_AS(parse_scenario("N = 2\nM = 4\nK = 8\nD = 4\n"),
                       doctest::Contains("'Q'"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_scenario("Q = 2\nN = 2\nM = 4\nK = 8\nD = 4\nbogus = 1\n"),
      doctest::Contains("'bogus'"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_scenario("Q = 2\nQ = 3\nN = 2\nM = 4\nK = 8\nD = 4\n"),
      doctest::Contains("'Q'"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_scenario("Q = 2\nN = 2\nM = 4\nK = abc\nD = 4\n"),
      doctest::Contains("'K'"), std::runtime_error);
}

TEST_CASE("scenario validation") {
  Scenario s = desk_scenario();
  s.subcarriers = 2;  // below delay_taps
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = desk_scenario();
  s.noise_w = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = desk_scenario();
  s.geometry.ue[0] = s.geometry.bs[0];  // coincident nodes
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("dbm conversions") {
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dbm_to_watt(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
  CHECK(watt_to_dbm(dbm_to_watt(17.0)) ==
        doctest::Approx(17.0).epsilon(1e-12));
}
