#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qres/extended_real.hpp"
#include "qres/model.hpp"

namespace qres::resilience {

/// Controllable iff rank(B_bar) = n and 0 is interior to the image polytope
/// {B_bar u : u in box}. The image test replaces the literal box test, which
/// would reject systems whose inputs are nonnegative.
bool check_controllability(const IntegratorSystem& sys);

struct LambdaPair {
  ExtendedReal plus;   // max{lambda : B v = lambda C, v in U_c}
  ExtendedReal minus;  // max{lambda : B v = -lambda C, v in U_c}
};

/// Requires a single nonzero lost column.
LambdaPair lambda_pair(const ActuatorSplit& split);

struct RPair {
  double r_plus = 0.0;   // r(C)
  double r_minus = 0.0;  // r(-C)
  std::vector<std::string> diagnostics;
};

/// Closed forms r(C) = (w_min + l+)/(w_max + l+), r(-C) = (w_max - l-)/(w_min - l-).
/// A vanishing denominator gives r = 0 and an unbounded lambda gives the limit 1,
/// each with a diagnostic.
RPair r_pair(const ActuatorSplit& split);

struct ResilienceReport {
  int lost_column = 0;
  ExtendedReal lambda_plus;
  ExtendedReal lambda_minus;
  double r_plus = 0.0;
  double r_minus = 0.0;
  double r_q = 0.0;
  double r_kq = 0.0;
  int order = 1;
  bool controllable = false;
  bool resilient = false;
  std::optional<bool> containment;  // filled by callers that ran the polytope check
  std::vector<std::string> diagnostics;
};

/// Full single-loss analysis. Throws UnsupportedLossError when p != 1.
ResilienceReport quantitative_resilience(const ActuatorSplit& split, int order = 1);

struct ReachTimeVerdict {
  ExtendedReal nominal_plus;       // T_N*(C)
  ExtendedReal malfunction_plus;   // T_M*(C)
  ExtendedReal nominal_minus;      // T_N*(-C)
  ExtendedReal malfunction_minus;  // T_M*(-C)
  bool controllable = false;
  bool resilient = false;
  double worst_ratio = 0.0;  // min over +-C of T_N*/T_M*, 0 when not resilient
};

/// Verdict from reach times along +-C: resilient iff controllable and both
/// T_N*/T_M* ratios lie in (0, 1]. Independent of the lambda closed forms.
ReachTimeVerdict resilience_via_reach_times(const ActuatorSplit& split);

/// True iff -x lies in the interior of Y = B U_c for every vertex x of C W_c.
/// Diagnostic only: resilience implies containment, not conversely.
bool polytope_containment_check(const ActuatorSplit& split);

}  // namespace qres::resilience
