#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qres/extended_real.hpp"
#include "qres/model.hpp"

namespace qres::oracle {

/// Outcome of a brute-force scan compared against the value predicted by theory.
struct ScanReport {
  ExtendedReal worst_value;
  Eigen::VectorXd worst_argument;
  ExtendedReal theory_value;
  double max_violation = 0.0;  // >= 0; relative excesses below 1e-9 are clamped to 0
  std::uint64_t evaluations = 0;
};

/// Excess of `observed` over `theory`, clamped to 0 when within rel_tol * max(1, |theory|).
/// Infinite when observed is +inf and theory is finite; 0 when theory is +inf.
double violation(ExtendedReal observed, ExtendedReal theory, double rel_tol = 1e-9);

inline constexpr std::uint64_t kMaxGridPoints = 1'000'000;

/// Max of T_M(w, d) over a uniform grid on W_c (vertices included) against the
/// vertex-enumeration T_M*(d). Throws CapacityError above kMaxGridPoints.
ScanReport grid_worst_w(const ActuatorSplit& split, const Direction& d, int points_per_axis);

/// `samples` deterministic unit directions in R^n, seeded. Points come from a
/// Halton sequence with a seeded random shift, mapped to the sphere.
std::vector<Eigen::VectorXd> sphere_directions(Eigen::Index n, int samples, std::uint64_t seed);

/// Max of t(d) over sampled unit directions plus +-C/|C| against max(t(C), t(-C)).
/// Requires a resilient single-loss split.
ScanReport direction_scan(const ActuatorSplit& split, int samples, std::uint64_t seed);

/// max over alpha of |T(alpha d) - alpha T(d)| / (alpha T(d)) for the nominal time.
double homogeneity_probe(const IntegratorSystem& sys, const Direction& d,
                         const std::vector<double>& scales);

/// As above, over both the nominal and the malfunctioning reach time.
double homogeneity_probe(const ActuatorSplit& split, const Direction& d,
                         const std::vector<double>& scales);

}  // namespace qres::oracle
