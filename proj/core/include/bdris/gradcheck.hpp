#pragma once

#include <string>
#include <vector>

#include "bdris/scenario.hpp"

namespace bdris {

/// The five analytic gradient families the pipeline relies on.
enum class GradFamily {
  kPrecoderPricing,      ///< cross-rate gradient wrt a precoder
  kSurrogateFirstOrder,  ///< own-rate surrogate vs log term at the iterate
  kCapacitanceOwn,       ///< own-rate gradient wrt capacitances
  kCapacitancePricing,   ///< cross-rate gradient wrt capacitances
  kSwitch,               ///< own + cross gradients wrt the selection matrix
};

std::string family_name(GradFamily f);

struct GradCheckResult {
  GradFamily family;
  double worst_rel_err = 0.0;
};

struct GradCheckOptions {
  int seeds = 5;
  std::uint64_t first_seed = 1;
  double threshold = 1e-4;
  /// Self-test hook: flips the sign of the chosen analytic family so the
  /// check must fail. Never set outside harness self-tests.
  bool corrupt = false;
  GradFamily corrupt_family = GradFamily::kPrecoderPricing;
};

/// Verifies every analytic gradient family against central finite
/// differences of the rate expressions on the given fixture, across seeds.
/// The finite-difference side touches only forward rate evaluations, never
/// the analytic formulas it checks. Returns one result per family, in enum
/// order.
std::vector<GradCheckResult> run_gradcheck(Scenario fixture,
                                           const GradCheckOptions& opt = {});

bool gradcheck_passed(const std::vector<GradCheckResult>& results,
                      double threshold);

}  // namespace bdris
