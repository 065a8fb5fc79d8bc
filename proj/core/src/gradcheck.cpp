#include "bdris/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "bdris/dsca_engine.hpp"
#include "bdris/linkalg.hpp"
#include "bdris/precoder_opt.hpp"
#include "bdris/capacitance_opt.hpp"
#include "bdris/rng.hpp"
#include "bdris/switch_opt.hpp"

namespace bdris {

namespace {

using cplx = std::complex<double>;
constexpr double kInvLn2 = 1.4426950408889634074;
constexpr double kTiny = 1e-300;

double rel_err(double analytic, double reference) {
  const double denom = std::max(std::abs(reference), kTiny);
  return std::abs(analytic - reference) / denom;
}

double vec_rel_err(const Eigen::VectorXcd& analytic,
                   const Eigen::VectorXcd& reference) {
  const double denom = std::max(reference.norm(), kTiny);
  return (analytic - reference).norm() / denom;
}

double vec_rel_err(const Eigen::VectorXd& analytic,
                   const Eigen::VectorXd& reference) {
  const double denom = std::max(reference.norm(), kTiny);
  return (analytic - reference).norm() / denom;
}

// Sum of the other users' rates as a function of the full state set.
double others_rate(int q, const ChannelSet& ch,
                   const std::vector<UserState>& states, const Scenario& s) {
  double r = 0.0;
  for (int j = 0; j < s.users; ++j) {
    if (j != q) r += user_rate(j, ch, states, s);
  }
  return r;
}

// Central finite-difference gradient over the real and imaginary parts of
// user q's stacked precoder, packed back as complex (df = Re{grad^H dw}).
Eigen::VectorXcd fd_precoder_grad(
    int q, const std::vector<UserState>& base, const Scenario& s,
    const std::function<double(const std::vector<UserState>&)>& fn) {
  const int n = s.bs_antennas, k_n = s.subcarriers;
  double rms = 0.0;
  for (const auto& wk : base[q].w) rms += wk.squaredNorm();
  rms = std::sqrt(rms / (k_n * n));
  const double h = 1e-5 * std::max(rms, 1e-12);

  Eigen::VectorXcd grad(k_n * n);
  std::vector<UserState> probe = base;
  for (int k = 0; k < k_n; ++k) {
    for (int a = 0; a < n; ++a) {
      double parts[2];
      for (int im = 0; im < 2; ++im) {
        const cplx delta = im ? cplx(0.0, h) : cplx(h, 0.0);
        probe[q].w[k][a] = base[q].w[k][a] + delta;
        const double up = fn(probe);
        probe[q].w[k][a] = base[q].w[k][a] - delta;
        const double down = fn(probe);
        probe[q].w[k][a] = base[q].w[k][a];
        parts[im] = (up - down) / (2.0 * h);
      }
      grad[k * n + a] = cplx(parts[0], parts[1]);
    }
  }
  return grad;
}

// Finite-difference gradient of a scalar function of one length-n complex
// vector.
Eigen::VectorXcd fd_complex_grad(
    const Eigen::VectorXcd& at, double h,
    const std::function<double(const Eigen::VectorXcd&)>& fn) {
  Eigen::VectorXcd grad(at.size());
  Eigen::VectorXcd probe = at;
  for (int i = 0; i < at.size(); ++i) {
    double parts[2];
    for (int im = 0; im < 2; ++im) {
      const cplx delta = im ? cplx(0.0, h) : cplx(h, 0.0);
      probe[i] = at[i] + delta;
      const double up = fn(probe);
      probe[i] = at[i] - delta;
      const double down = fn(probe);
      probe[i] = at[i];
      parts[im] = (up - down) / (2.0 * h);
    }
    grad[i] = cplx(parts[0], parts[1]);
  }
  return grad;
}

// FD gradient wrt user q's capacitances; relative steps keep the 1e-12 F
// scale well conditioned.
Eigen::VectorXd fd_capacitance_grad(
    int q, const std::vector<UserState>& base, const Scenario& s,
    const std::vector<double>& freqs,
    const std::function<double(const std::vector<UserState>&)>& fn) {
  Eigen::VectorXd grad(base[q].c.size());
  std::vector<UserState> probe = base;
  for (int e = 0; e < base[q].c.size(); ++e) {
    const double h = 1e-5 * base[q].c[e];
    probe[q].c[e] = base[q].c[e] + h;
    refresh_reflection(probe[q], freqs, s.circuit);
    const double up = fn(probe);
    probe[q].c[e] = base[q].c[e] - h;
    refresh_reflection(probe[q], freqs, s.circuit);
    const double down = fn(probe);
    probe[q].c[e] = base[q].c[e];
    grad[e] = (up - down) / (2.0 * h);
  }
  refresh_reflection(probe[q], freqs, s.circuit);
  return grad;
}

}  // namespace

std::string family_name(GradFamily f) {
  switch (f) {
    case GradFamily::kPrecoderPricing: return "precoder_pricing";
    case GradFamily::kSurrogateFirstOrder: return "surrogate_first_order";
    case GradFamily::kCapacitanceOwn: return "capacitance_own";
    case GradFamily::kCapacitancePricing: return "capacitance_pricing";
    case GradFamily::kSwitch: return "switch";
  }
  return "unknown";
}

std::vector<GradCheckResult> run_gradcheck(Scenario fixture,
                                           const GradCheckOptions& opt) {
  fixture.validate();
  const auto freqs = fixture.subcarrier_freqs();
  const int n = fixture.bs_antennas, m = fixture.ris_elements,
            k_n = fixture.subcarriers;

  double worst[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
  auto sign = [&](GradFamily f) {
    return (opt.corrupt && opt.corrupt_family == f) ? -1.0 : 1.0;
  };

  for (int si = 0; si < opt.seeds; ++si) {
    fixture.seed = opt.first_seed + static_cast<std::uint64_t>(si);
    const ChannelSet ch = synthesize_channels(fixture);
    const std::vector<UserState> states = initialize(fixture, ch);
    const LinkTables tables = build_link_tables(ch, states, fixture);
    Rng dir_rng(fixture.seed + 0xC0FFEE);

    for (int q = 0; q < fixture.users; ++q) {
      // 1) precoder pricing vs FD of the others' rates
      {
        const PrecoderPricing pr = precoder_pricing(q, tables, states);
        Eigen::VectorXcd analytic(k_n * n);
        for (int k = 0; k < k_n; ++k) {
          analytic.segment(k * n, n) = pr.pi[k];
        }
        const Eigen::VectorXcd fd = fd_precoder_grad(
            q, states, fixture, [&](const std::vector<UserState>& st) {
              return others_rate(q, ch, st, fixture);
            });
        worst[0] = std::max(
            worst[0],
            vec_rel_err(sign(GradFamily::kPrecoderPricing) * analytic, fd));
      }

      // 2) surrogate vs log term: identical FD gradients at the iterate
      {
        const SurrogateCoeffs sc = surrogate_coeffs(q, tables, states);
        for (int k = 0; k < k_n; ++k) {
          const Eigen::VectorXcd f = tables.composite(q, q, k);
          const double mui = tables.mui(q, k);
          const double a = sc.a[k] * sign(GradFamily::kSurrogateFirstOrder);
          const Eigen::VectorXcd& b = sc.b[k];
          auto surrogate = [&](const Eigen::VectorXcd& w) {
            const cplx fw = f.dot(w);
            return -a * std::norm(fw) + 2.0 * std::real(b.dot(w));
          };
          auto log_term = [&](const Eigen::VectorXcd& w) {
            return kInvLn2 * std::log1p(std::norm(f.dot(w)) / mui);
          };
          const double h = 1e-5 * std::max(states[q].w[k].norm() /
                                               std::sqrt(double(n)),
                                           1e-12);
          const Eigen::VectorXcd g_sur =
              fd_complex_grad(states[q].w[k], h, surrogate);
          const Eigen::VectorXcd g_log =
              fd_complex_grad(states[q].w[k], h, log_term);
          worst[1] = std::max(worst[1], vec_rel_err(g_sur, g_log));
        }
      }

      // 3) own-rate capacitance gradient vs FD
      {
        const Eigen::VectorXd analytic =
            capacitance_grad_own(q, ch, states, tables, fixture);
        const Eigen::VectorXd fd = fd_capacitance_grad(
            q, states, fixture, freqs,
            [&](const std::vector<UserState>& st) {
              return user_rate(q, ch, st, fixture);
            });
        worst[2] = std::max(
            worst[2],
            vec_rel_err(sign(GradFamily::kCapacitanceOwn) * analytic, fd));
      }

      // 4) capacitance pricing vs FD of the others' rates
      {
        const Eigen::VectorXd analytic =
            capacitance_pricing(q, ch, states, tables, fixture);
        const Eigen::VectorXd fd = fd_capacitance_grad(
            q, states, fixture, freqs,
            [&](const std::vector<UserState>& st) {
              return others_rate(q, ch, st, fixture);
            });
        worst[3] = std::max(
            worst[3],
            vec_rel_err(sign(GradFamily::kCapacitancePricing) * analytic, fd));
      }

      // 5) selection-matrix gradients, checked directionally at a relaxed
      // (doubly stochastic, interior) point where finite differences are
      // unconstrained
      {
        std::vector<UserState> relaxed = states;
        relaxed[q].sw = 0.7 * states[q].sw +
                        (0.3 / m) * Eigen::MatrixXd::Ones(m, m);
        const LinkTables tr = build_link_tables(ch, relaxed, fixture);
        const Eigen::MatrixXd own =
            sign(GradFamily::kSwitch) *
            switch_grad_own(q, ch, relaxed, tr, fixture).real();
        const Eigen::MatrixXd cross =
            sign(GradFamily::kSwitch) *
            switch_pricing(q, ch, relaxed, tr, fixture).real();

        const double h = 1e-5;
        std::vector<UserState> probe = relaxed;
        for (int dir = 0; dir < 6; ++dir) {
          Eigen::MatrixXd delta(m, m);
          for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) delta(i, j) = dir_rng.gaussian();
          }
          delta /= delta.norm();

          auto directional = [&](auto&& fn) {
            probe[q].sw = relaxed[q].sw + h * delta;
            const double up = fn(probe);
            probe[q].sw = relaxed[q].sw - h * delta;
            const double down = fn(probe);
            probe[q].sw = relaxed[q].sw;
            return (up - down) / (2.0 * h);
          };
          const double fd_own = directional([&](const auto& st) {
            return user_rate(q, ch, st, fixture);
          });
          const double fd_cross = directional([&](const auto& st) {
            return others_rate(q, ch, st, fixture);
          });
          worst[4] = std::max(
              worst[4], rel_err(own.cwiseProduct(delta).sum(), fd_own));
          worst[4] = std::max(
              worst[4], rel_err(cross.cwiseProduct(delta).sum(), fd_cross));
        }
      }
    }
  }

  std::vector<GradCheckResult> out;
  const GradFamily order[5] = {
      GradFamily::kPrecoderPricing, GradFamily::kSurrogateFirstOrder,
      GradFamily::kCapacitanceOwn, GradFamily::kCapacitancePricing,
      GradFamily::kSwitch};
  for (int i = 0; i < 5; ++i) out.push_back({order[i], worst[i]});
  return out;
}

bool gradcheck_passed(const std::vector<GradCheckResult>& results,
                      double threshold) {
  for (const auto& r : results) {
    if (!(r.worst_rel_err < threshold)) return false;
  }
  return true;
}

}  // namespace bdris
