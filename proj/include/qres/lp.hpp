#pragma once

#include <Eigen/Dense>

#include "qres/extended_real.hpp"
#include "qres/model.hpp"

namespace qres::lp {

/// maximize objective . x  s.t.  eq_matrix * x = eq_rhs,  lower <= x <= upper.
/// Bounds may be infinite.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  // Throws ArgumentError on inconsistent dimensions, NaN data or lower > upper.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;        // meaningful when Optimal
  Eigen::VectorXd argument;  // meaningful when Optimal
};

struct LpOptions {
  double feas_tol = 1e-9;
  double pivot_tol = 1e-11;
  int max_pivots = 200000;
};

/// Dense two-phase simplex with Bland's rule. Deterministic: the same input
/// always produces the same pivots and a bitwise-identical outcome.
LpOutcome solve(const LpProblem& problem, const LpOptions& options = {});

const char* to_string(LpStatus status);

/// Result of max{lambda >= 0 : M x = lambda d, x in box}.
struct DirectionalSpeed {
  enum class Kind {
    Finite,               // optimum attained, possibly 0
    Unbounded,            // lambda can grow without limit
    NegativeCertificate,  // no x in the box with M x on the ray R+ d
  };
  Kind kind = Kind::NegativeCertificate;
  ExtendedReal lambda;       // 0 for NegativeCertificate, +inf for Unbounded
  Eigen::VectorXd argument;  // x attaining lambda when Finite
  double threshold = 0.0;    // lambda must exceed this to count as positive

  bool is_positive() const {
    return kind == Kind::Unbounded || (kind == Kind::Finite && lambda.value() > threshold);
  }
};

/// Largest speed along d: max{lambda >= 0 : M x = lambda d, x in box}.
/// `offset` is added on the left (M x + offset = lambda d) so the same kernel
/// serves the malfunctioning case with a fixed undesirable input.
/// Throws ArgumentError when d = 0.
DirectionalSpeed max_scaled_direction(const Eigen::MatrixXd& m, const InputBox& box,
                                      const Eigen::VectorXd& d,
                                      const Eigen::VectorXd& offset = {});

/// Numerical zero for a speed along d: 1e-9 times the largest speed the
/// columns of M can produce, measured in units of ||d||_inf.
double speed_threshold(const Eigen::MatrixXd& m, const InputBox& box, const Eigen::VectorXd& d);

/// max{lambda : M x = lambda * target, x in box} with lambda free in sign.
/// Returns +inf when unbounded and -inf when infeasible.
ExtendedReal max_signed_multiple(const Eigen::MatrixXd& m, const InputBox& box,
                                 const Eigen::VectorXd& target);

}  // namespace qres::lp
