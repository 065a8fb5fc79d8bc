#pragma once

#include <complex>

namespace bdris {

/// Angular-frequency factor of the element model, kept as a named constant.
inline constexpr double kKappa = 6.283185307179586476925286766559;

/// RLC constants of the resonant equivalent circuit of one reflective
/// element, together with the free-space impedance and the allowed range of
/// the tunable capacitance. Defaults are a practical varactor-loaded element
/// at 3.5 GHz.
struct CircuitParams {
  double r_ohm = 1.0;        ///< series loss resistance
  double l1_h = 2.5e-9;      ///< bottom-layer inductance
  double l2_h = 0.7e-9;      ///< top-layer inductance
  double z0_ohm = 377.0;     ///< free-space impedance
  double c_min_f = 0.47e-12; ///< varactor capacitance lower bound
  double c_max_f = 2.35e-12; ///< varactor capacitance upper bound

  /// Throws std::invalid_argument unless r >= 0, l1/l2/z0 > 0 and
  /// 0 < c_min < c_max.
  void validate() const;
};

/// Characteristic impedance Z(f, c) of the equivalent circuit, in ohms.
/// Throws std::domain_error if f <= 0 or c <= 0.
std::complex<double> impedance(double f_hz, double c_f,
                               const CircuitParams& p);

/// Complex reflection coefficient of one element at frequency f with
/// capacitance c. Evaluated through the rational reformulation
/// 1 - 2 / (1 + D/N), which is algebraically identical to
/// (Z - Z0) / (Z + Z0) but numerically friendlier and differentiable in
/// closed form. Throws std::domain_error on a bad domain and
/// std::runtime_error if |N + D| underflows (resonance singularity).
std::complex<double> reflection(double f_hz, double c_f,
                                const CircuitParams& p);

/// Analytic derivative of conj(reflection) with respect to the capacitance,
/// in 1/farad. Same error behavior as reflection().
std::complex<double> reflection_conj_grad(double f_hz, double c_f,
                                          const CircuitParams& p);

}  // namespace bdris
