// Acceptance suite: exercises every system-level requirement end to end and
// prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bdris/capacitance_opt.hpp"
#include "bdris/circuit.hpp"
#include "bdris/dsca_engine.hpp"
#include "bdris/gradcheck.hpp"
#include "bdris/precoder_opt.hpp"
#include "bdris/rng.hpp"
#include "bdris/switch_opt.hpp"
#include "commands.hpp"

using namespace bdris;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// one-sided paired t statistic for "a > b"
double paired_t(const std::vector<double>& a, const std::vector<double>& b,
                double* mean_gap) {
  const int n = static_cast<int>(a.size());
  double m = 0.0;
  for (int i = 0; i < n; ++i) m += a[i] - b[i];
  m /= n;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - m;
    sq += d * d;
  }
  const double sd = std::sqrt(sq / (n - 1));
  *mean_gap = m;
  return sd > 0.0 ? m / (sd / std::sqrt(double(n))) : 1e300;
}

constexpr double kTCrit29 = 1.699127;  // one-sided 95%, 29 dof

Scenario desk_fixture(int m, int k, double p_dbm) {
  Scenario s;
  s.users = 2;
  s.bs_antennas = 4;
  s.ris_elements = m;
  s.subcarriers = k;
  s.delay_taps = 4;
  s.power_w = dbm_to_watt(p_dbm);
  s.noise_w = dbm_to_watt(-90.0);
  s.geometry = default_geometry(s.users, 60.0);
  s.t_max = 60;
  return s;
}

Outcome check_rational_identity() {
  const CircuitParams p{};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double f = 3.45e9 + 1e8 * i / 99.0;
      const double c = 0.47e-12 + (2.35e-12 - 0.47e-12) * j / 99.0;
      const std::complex<double> z = impedance(f, c, p);
      const std::complex<double> direct = (z - p.z0_ohm) / (z + p.z0_ohm);
      worst = std::max(worst, std::abs(direct - reflection(f, c, p)));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max |phi_direct - phi_rational| = %.3g",
                worst);
  return {worst < 1e-10, buf};
}

Outcome check_gradients() {
  GradCheckOptions opt;
  opt.seeds = 5;
  const auto results = run_gradcheck(cli::gradcheck_fixture(), opt);
  std::ostringstream detail;
  bool pass = true;
  for (const auto& r : results) {
    pass = pass && r.worst_rel_err < 1e-4;
    detail << family_name(r.family) << "=" << std::scientific
           << r.worst_rel_err << " ";
  }
  return {pass, detail.str()};
}

Outcome check_lsap_exact() {
  Rng rng(2024);
  long checked = 0, wrong = 0;
  for (int m = 2; m <= 6; ++m) {
    for (int trial = 0; trial < 200; ++trial) {
      Eigen::MatrixXd score(m, m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) score(i, j) = rng.uniform(-10.0, 10.0);
      }
      const Eigen::MatrixXd s = solve_lsap_max(score);
      double mine = 0.0;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          if (s(i, j) == 1.0) mine += score(i, j);
        }
      }
      std::vector<int> idx(m);
      std::iota(idx.begin(), idx.end(), 0);
      double best = -1e300;
      do {
        double val = 0.0;
        for (int i = 0; i < m; ++i) val += score(i, idx[i]);
        best = std::max(best, val);
      } while (std::next_permutation(idx.begin(), idx.end()));
      ++checked;
      if (mine != best) ++wrong;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%ld instances, %ld objective mismatches",
                checked, wrong);
  return {wrong == 0, buf};
}

Outcome check_precoder_kkt() {
  Rng rng(555);
  double worst_stat = 0.0, worst_slack = 0.0;
  int active = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + rng.uniform_int(2);
    const int kk = 2 + rng.uniform_int(3);
    SurrogateCoeffs co;
    co.a.resize(kk);
    co.b.assign(kk, Eigen::VectorXcd());
    PrecoderPricing pr;
    pr.pi.assign(kk, Eigen::VectorXcd());
    std::vector<Eigen::VectorXcd> w_t(kk), f_own(kk);
    for (int k = 0; k < kk; ++k) {
      co.a[k] = rng.uniform(0.0, 2.0);
      co.b[k] = Eigen::VectorXcd(n);
      pr.pi[k] = Eigen::VectorXcd(n);
      w_t[k] = Eigen::VectorXcd(n);
      f_own[k] = Eigen::VectorXcd(n);
      for (int i = 0; i < n; ++i) {
        co.b[k][i] = rng.complex_gaussian(1.0);
        pr.pi[k][i] = rng.complex_gaussian(1.0);
        w_t[k][i] = 0.4 * rng.complex_gaussian(1.0);
        f_own[k][i] = rng.complex_gaussian(1.0);
      }
    }
    const double tau = rng.uniform(0.5, 2.5);
    // half the instances get a loose budget so both KKT branches appear
    const double budget =
        trial % 2 == 0 ? rng.uniform(0.05, 3.0) : rng.uniform(20.0, 80.0);
    const PrecoderSolution sol =
        solve_precoder(co, pr, w_t, f_own, tau, budget);
    if (sol.lambda > 0.0) ++active;

    Eigen::VectorXcd resid(kk * n), v_full(kk * n);
    for (int k = 0; k < kk; ++k) {
      const Eigen::VectorXcd v = pr.pi[k] + 2.0 * co.b[k] + tau * w_t[k];
      resid.segment(k * n, n) =
          2.0 * (co.a[k] * f_own[k] * (f_own[k].dot(sol.w[k])) +
                 (0.5 * tau + sol.lambda) * sol.w[k]) -
          v;
      v_full.segment(k * n, n) = v;
    }
    worst_stat = std::max(worst_stat, resid.norm() / v_full.norm());
    worst_slack = std::max(
        worst_slack, sol.lambda * std::abs(sol.power - budget) / budget);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "stationarity %.3g, slackness %.3g (%d/50 active budgets)",
                worst_stat, worst_slack, active);
  return {worst_stat < 1e-8 && worst_slack < 1e-8 && active > 0 &&
              active < 50,
          buf};
}

Outcome check_capacitance_closed_form() {
  const CircuitParams p{};
  Rng rng(808);
  const int grid = 200;
  const double lo = p.c_min_f, hi = p.c_max_f;
  const double cell = (hi - lo) / (grid - 1);
  double worst_cells = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd c_t(2), target(2);
    for (int m = 0; m < 2; ++m) {
      c_t[m] = rng.uniform(lo, hi);
      target[m] = c_t[m] + rng.uniform(-2.0, 2.0) * (hi - lo);
    }
    const double tau = rng.uniform(0.5, 3.0);
    const Eigen::VectorXd grad =
        tau * (target - c_t) / (kPicofarad * kPicofarad);
    const Eigen::VectorXd closed = update_capacitance(
        c_t, 0.5 * grad, 0.5 * grad, tau, p);

    auto objective = [&](const Eigen::VectorXd& c) {
      const Eigen::VectorXd d = (c - c_t) / kPicofarad;
      return -0.5 * tau * d.squaredNorm() + (kPicofarad * grad).dot(d);
    };
    Eigen::VectorXd best(2);
    double best_val = -1e300;
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        Eigen::VectorXd cand(2);
        cand << lo + i * cell, lo + j * cell;
        const double val = objective(cand);
        if (val > best_val) {
          best_val = val;
          best = cand;
        }
      }
    }
    worst_cells = std::max(worst_cells,
                           (closed - best).cwiseAbs().maxCoeff() / cell);
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "worst distance to grid argmax = %.3f cells", worst_cells);
  return {worst_cells <= 1.0, buf};
}

Outcome check_feasibility_invariance() {
  long violations = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Scenario s = desk_fixture(16, 8, 25.0);
    s.seed = seed;
    DscaEngine engine(s);
    for (int t = 0; t < 60; ++t) {
      engine.step();
      for (const auto& u : engine.states()) {
        if (!state_feasible(u, s, 1e-9)) ++violations;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "%ld violations across 20 seeds x 60 iterations", violations);
  return {violations == 0, buf};
}

Outcome check_convergence() {
  int converged = 0;
  int monotone_breaks = 0;
  double worst_dip = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Scenario s = desk_fixture(16, 8, 25.0);
    s.seed = seed;
    DscaEngine engine(s);
    const RunTrace& trace = engine.run();
    if (trace.converged && trace.iterations <= 60) ++converged;
    for (int t = 3; t < trace.iterations; ++t) {
      const double dip = trace.sum_rate[t - 1] - trace.sum_rate[t];
      worst_dip = std::max(worst_dip, dip);
      if (dip > 1e-6) ++monotone_breaks;
    }
  }
  char buf[160];
  std::snprintf(
      buf, sizeof(buf),
      "%d/20 converged within 60 iterations, %d monotonicity breaks "
      "(worst dip %.3g)",
      converged, monotone_breaks, worst_dip);
  return {converged >= 18 && monotone_breaks == 0, buf};
}

Outcome check_scheme_ordering() {
  const char* schemes[6] = {"bd-ris",    "diag-ris",    "no-ris",
                            "bd-ris-zp", "diag-ris-zp", "no-ris-zp"};
  std::vector<std::vector<double>> final_rates(6);
  for (int si = 0; si < 6; ++si) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      Scenario s = desk_fixture(32, 16, 30.0);
      s.scheme = parse_scheme(schemes[si]);
      s.seed = seed;
      s.t_max = 100;
      const RunTrace trace = run(s);
      final_rates[si].push_back(trace.sum_rate.back());
    }
  }
  struct Leg {
    int a, b;
    const char* name;
  };
  const Leg legs[5] = {{0, 1, "bd>diag"},
                       {1, 2, "diag>none"},
                       {0, 3, "bd:coop>zp"},
                       {1, 4, "diag:coop>zp"},
                       {2, 5, "none:coop>zp"}};
  std::ostringstream detail;
  bool pass = true;
  for (const Leg& leg : legs) {
    double gap = 0.0;
    const double t = paired_t(final_rates[leg.a], final_rates[leg.b], &gap);
    const bool ok = gap > 0.0 && t > kTCrit29;
    pass = pass && ok;
    detail << leg.name << ": gap=" << std::fixed << std::setprecision(4)
           << gap << " t=" << std::setprecision(2) << t
           << (ok ? " ok; " : " FAIL; ");
  }
  return {pass, detail.str()};
}

Outcome check_frequency_selectivity() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bdris_acceptance";
  fs::create_directories(dir);
  const std::string cfg = (dir / "profile.cfg").string();
  const std::string out = (dir / "profile.csv").string();
  {
    std::ofstream f(cfg);
    f << "Q = 2\nN = 4\nM = 16\nK = 8\nD = 4\np_dbm = 25\nseed = 1\n";
  }
  cli::ProfileOptions opt;
  opt.config = cfg;
  opt.seeds = 3;
  opt.out = out;
  if (cli::cmd_profile(opt) != 0) return {false, "profile command failed"};

  std::ifstream in(out);
  std::string line;
  std::getline(in, line);  // header
  double amp_lo = 2.0, amp_hi = -2.0, ph_lo = 10.0, ph_hi = -10.0;
  bool amp_valid = true;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    std::getline(ls, cell, ',');
    std::getline(ls, cell, ',');
    const double amp = std::stod(cell);
    std::getline(ls, cell, ',');
    const double ph = std::stod(cell);
    amp_valid = amp_valid && amp > 0.0 && amp <= 1.0;
    amp_lo = std::min(amp_lo, amp);
    amp_hi = std::max(amp_hi, amp);
    ph_lo = std::min(ph_lo, ph);
    ph_hi = std::max(ph_hi, ph);
    ++rows;
  }
  fs::remove_all(dir);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d subcarriers, phase spread %.4g rad, amplitude spread "
                "%.4g",
                rows, ph_hi - ph_lo, amp_hi - amp_lo);
  return {rows == 8 && amp_valid && (ph_hi - ph_lo) > 1e-3 &&
              (amp_hi - amp_lo) > 1e-4,
          buf};
}

Outcome check_overhead() {
  if (cooperation_overhead(2, 64, 4, 100) != 20712) {
    return {false, "formula mismatch at (2,64,4,100)"};
  }
  bool counters_ok = true;
  std::ostringstream detail;
  detail << "formula(2,64,4,100)=20712; ";
  const int fixtures[2][4] = {{2, 8, 2, 4}, {3, 4, 3, 5}};
  for (const auto& fx : fixtures) {
    Scenario s;
    s.users = fx[0];
    s.subcarriers = fx[1];
    s.bs_antennas = fx[2];
    s.ris_elements = fx[3];
    s.delay_taps = 2;
    s.power_w = dbm_to_watt(20.0);
    s.noise_w = dbm_to_watt(-90.0);
    s.geometry = default_geometry(s.users, 60.0);
    s.t_max = 7;
    s.eps = 1e-300;
    DscaEngine engine(s);
    engine.run();
    const long long expect =
        7LL * cooperation_overhead(fx[0], fx[1], fx[2], fx[3]);
    counters_ok =
        counters_ok && engine.bus().elements_published() == expect;
    detail << "bus(Q=" << fx[0] << ")=" << engine.bus().elements_published()
           << "/" << expect << " ";
  }
  return {counters_ok, detail.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double time_limit_s;  // 0 = unconstrained
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"rational reflection identity on the tuning grid", 1.0,
       check_rational_identity},
      {"analytic gradients vs finite differences", 30.0, check_gradients},
      {"assignment solver exactness vs brute force", 10.0, check_lsap_exact},
      {"precoder subproblem KKT conditions", 10.0, check_precoder_kkt},
      {"capacitance closed form vs grid search", 0.0,
       check_capacitance_closed_form},
      {"constraint feasibility across iterations", 0.0,
       check_feasibility_invariance},
      {"convergence and monotone ascent", 0.0, check_convergence},
      {"scheme ordering with paired significance", 1200.0,
       check_scheme_ordering},
      {"frequency-selective optimized response", 0.0,
       check_frequency_selectivity},
      {"cooperation overhead count", 0.0, check_overhead},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (criteria[i].time_limit_s > 0.0 &&
        elapsed >= criteria[i].time_limit_s) {
      outcome.pass = false;
      outcome.detail += " [over time budget]";
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s  criterion %zu: %s (%.2f s) - %s\n",
                outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                elapsed, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
