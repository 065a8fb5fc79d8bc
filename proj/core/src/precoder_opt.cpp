#include "bdris/precoder_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace bdris {

namespace {
constexpr double kInvLn2 = 1.4426950408889634074;
using cplx = std::complex<double>;
}  // namespace

PrecoderPricing precoder_pricing(int q, const LinkTables& t,
                                 const std::vector<UserState>& states) {
  PrecoderPricing out;
  out.pi.assign(t.subcarriers,
                Eigen::VectorXcd::Zero(states[q].w[0].size()));
  for (int k = 0; k < t.subcarriers; ++k) {
    for (int j = 0; j < t.users; ++j) {
      if (j == q) continue;
      const double weight =
          t.snr(j, k) / ((1.0 + t.snr(j, k)) * t.mui(j, k));
      const Eigen::VectorXcd& f = t.composite(q, j, k);
      const cplx fw = t.link_gain(q, j, k);  // f_qj^H w_qk
      out.pi[k] -= 2.0 * kInvLn2 * weight * fw * f;
    }
  }
  return out;
}

SurrogateCoeffs surrogate_coeffs(int q, const LinkTables& t,
                                 const std::vector<UserState>& states) {
  (void)states;
  SurrogateCoeffs out;
  out.a.setZero(t.subcarriers);
  out.b.assign(t.subcarriers, Eigen::VectorXcd());
  for (int k = 0; k < t.subcarriers; ++k) {
    const cplx d = t.link_gain(q, q, k);  // f_qq^H w_qk
    const double p = std::norm(d);
    const double mui = t.mui(q, k);
    out.a[k] = kInvLn2 * p / ((mui + p) * mui);
    out.b[k] = (kInvLn2 / mui) * d * t.composite(q, q, k);
  }
  return out;
}

namespace {

// w_k(sigma) for sigma = tau/2 + lambda via the rank-one inversion
// (a f f^H + sigma I)^-1 v = (v - f * a (f^H v) / (sigma + a |f|^2)) / sigma.
Eigen::VectorXcd block_solve(double a, const Eigen::VectorXcd& f,
                             const Eigen::VectorXcd& v, double sigma) {
  if (a == 0.0) return 0.5 / sigma * v;
  const cplx fv = f.dot(v);
  return 0.5 / sigma * (v - f * (a * fv / (sigma + a * f.squaredNorm())));
}

}  // namespace

PrecoderSolution solve_precoder(const SurrogateCoeffs& coeffs,
                                const PrecoderPricing& pricing,
                                const std::vector<Eigen::VectorXcd>& w_t,
                                const std::vector<Eigen::VectorXcd>& f_own,
                                double tau, double power_budget) {
  if (!(tau > 0.0) || !(power_budget > 0.0)) {
    throw std::invalid_argument("solve_precoder: tau and P must be positive");
  }
  const int k_n = static_cast<int>(w_t.size());
  std::vector<Eigen::VectorXcd> v(k_n);
  for (int k = 0; k < k_n; ++k) {
    v[k] = pricing.pi[k] + 2.0 * coeffs.b[k] + tau * w_t[k];
  }

  auto eval = [&](double lambda, std::vector<Eigen::VectorXcd>& w) {
    const double sigma = 0.5 * tau + lambda;
    double power = 0.0;
    for (int k = 0; k < k_n; ++k) {
      w[k] = block_solve(coeffs.a[k], f_own[k], v[k], sigma);
      power += w[k].squaredNorm();
    }
    return power;
  };

  PrecoderSolution sol;
  sol.w.assign(k_n, Eigen::VectorXcd());
  sol.power = eval(0.0, sol.w);
  sol.lambda = 0.0;
  if (sol.power <= power_budget) return sol;

  // ||w(lambda)||^2 decreases continuously to 0, so a bracket always exists.
  double lo = 0.0, hi = 1.0;
  std::vector<Eigen::VectorXcd> w_hi(k_n);
  double p_hi = eval(hi, w_hi);
  int guard = 0;
  while (p_hi > power_budget) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) {
      throw std::runtime_error("solve_precoder: bisection bracket failed");
    }
    p_hi = eval(hi, w_hi);
  }

  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // double resolution reached
    const double p_mid = eval(mid, sol.w);
    if (p_mid > power_budget) {
      lo = mid;
    } else {
      hi = mid;
      w_hi = sol.w;
      p_hi = p_mid;
    }
  }
  // Return the feasible endpoint of the final bracket.
  sol.lambda = hi;
  sol.w = w_hi;
  sol.power = p_hi;
  return sol;
}

}  // namespace bdris
