#include "bdris/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bdris {

namespace {

using cplx = std::complex<double>;
constexpr cplx kJ{0.0, 1.0};

void check_domain(double f_hz, double c_f) {
  if (!(f_hz > 0.0)) {
    throw std::domain_error("circuit: frequency must be positive, got " +
                            std::to_string(f_hz));
  }
  if (!(c_f > 0.0)) {
    throw std::domain_error("circuit: capacitance must be positive, got " +
                            std::to_string(c_f));
  }
}

// Numerator/denominator pair of the rational reflection form. N is the
// series-resonance polynomial of the full loop, D adds the radiation load.
struct RationalParts {
  cplx n;
  cplx d;
};

RationalParts rational_parts(double f_hz, double c_f, const CircuitParams& p) {
  const double kf = kKappa * f_hz;
  const cplx n = 1.0 - kf * kf * (p.l1_h + p.l2_h) * c_f +
                 kJ * kf * p.r_ohm * c_f;
  const cplx d = kJ * kf * (p.l1_h / p.z0_ohm) *
                 (1.0 - kf * kf * p.l2_h * c_f + kJ * kf * p.r_ohm * c_f);
  return {n, d};
}

}  // namespace

void CircuitParams::validate() const {
  if (!(r_ohm >= 0.0)) throw std::invalid_argument("circuit: R must be >= 0");
  if (!(l1_h > 0.0)) throw std::invalid_argument("circuit: L1 must be > 0");
  if (!(l2_h > 0.0)) throw std::invalid_argument("circuit: L2 must be > 0");
  if (!(z0_ohm > 0.0)) throw std::invalid_argument("circuit: Z0 must be > 0");
  if (!(c_min_f > 0.0 && c_min_f < c_max_f)) {
    throw std::invalid_argument("circuit: need 0 < c_min < c_max");
  }
}

std::complex<double> impedance(double f_hz, double c_f,
                               const CircuitParams& p) {
  check_domain(f_hz, c_f);
  const cplx jkf = kJ * (kKappa * f_hz);
  const cplx branch = jkf * p.l2_h + p.r_ohm + 1.0 / (jkf * c_f);
  return jkf * p.l1_h * branch /
         (jkf * (p.l1_h + p.l2_h) + p.r_ohm + 1.0 / (jkf * c_f));
}

std::complex<double> reflection(double f_hz, double c_f,
                                const CircuitParams& p) {
  check_domain(f_hz, c_f);
  const auto [n, d] = rational_parts(f_hz, c_f, p);
  const cplx den = n + d;
  if (std::abs(den) < 1e-30) {
    throw std::runtime_error("circuit: resonance singularity at f=" +
                             std::to_string(f_hz) +
                             " Hz, c=" + std::to_string(c_f * 1e12) + " pF");
  }
  // 1 - 2N/(N+D), the expanded form of 1 - 2/(1 + D/N).
  return 1.0 - 2.0 * n / den;
}

std::complex<double> reflection_conj_grad(double f_hz, double c_f,
                                          const CircuitParams& p) {
  check_domain(f_hz, c_f);
  const double kf = kKappa * f_hz;
  const auto [n, d] = rational_parts(f_hz, c_f, p);
  const cplx nc = std::conj(n);
  const cplx dc = std::conj(d);
  const cplx den = nc + dc;
  if (std::abs(den) < 1e-30) {
    throw std::runtime_error("circuit: resonance singularity at f=" +
                             std::to_string(f_hz) +
                             " Hz, c=" + std::to_string(c_f * 1e12) + " pF");
  }
  const cplx dnc = -kf * kf * (p.l1_h + p.l2_h) - kJ * kf * p.r_ohm;
  const cplx ddc =
      -kJ * kf * (p.l1_h / p.z0_ohm) * (-kf * kf * p.l2_h - kJ * kf * p.r_ohm);
  return -2.0 / (den * den) * (dnc * dc - nc * ddc);
}

}  // namespace bdris
