#include "qres/resilience.hpp"

#include <algorithm>
#include <cmath>

#include "qres/errors.hpp"
#include "qres/lp.hpp"
#include "qres/reach.hpp"

namespace qres::resilience {

namespace {

// r-values within this distance of 0 or 1 are treated as on the boundary.
constexpr double kMembershipTol = 1e-9;

void require_single_loss(const ActuatorSplit& split, const char* who) {
  if (split.lost_count() != 1)
    throw UnsupportedLossError(std::string(who) + ": closed forms cover a single lost column, got " +
                               std::to_string(split.lost_count()));
}

bool in_unit_interval(double r) { return r > kMembershipTol && r <= 1.0 + kMembershipTol; }

// One side of the closed form: (a + lambda)/(b + lambda) with a, b taken from
// the w-box. `sign` is +1 for r(C) and -1 for r(-C).
double closed_form(double num_w, double den_w, ExtendedReal lambda, int sign, const char* label,
                   std::vector<std::string>& diag) {
  if (lambda.is_pos_inf()) {
    diag.push_back(std::string(label) + ": lambda unbounded, using the limit r = 1");
    return 1.0;
  }
  if (lambda.is_neg_inf()) {
    diag.push_back(std::string(label) + ": lambda program infeasible, r = 0");
    return 0.0;
  }
  const double num = num_w + sign * lambda.value();
  const double den = den_w + sign * lambda.value();
  if (std::abs(den) <= 1e-12 * std::max(1.0, std::abs(num))) {
    diag.push_back(std::string(label) + ": degenerate denominator, r = 0");
    return 0.0;
  }
  return num / den + 0.0;  // no -0 in reports
}

}  // namespace

bool check_controllability(const IntegratorSystem& sys) {
  const Eigen::MatrixXd& b = sys.b_bar();
  const Eigen::Index n = b.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return false;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  if (rank < n) return false;

  for (Eigen::Index j = 0; j < n; ++j) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = s;
      if (!lp::max_scaled_direction(b, sys.box(), e).is_positive()) return false;
    }
  }
  return true;
}

LambdaPair lambda_pair(const ActuatorSplit& split) {
  require_single_loss(split, "lambda_pair");
  const Eigen::VectorXd c = split.c().col(0);
  if (c.isZero(0.0)) throw ArgumentError("lambda_pair: lost column is zero");
  return {lp::max_signed_multiple(split.b(), split.u_box(), c),
          lp::max_signed_multiple(split.b(), split.u_box(), -c)};
}

RPair r_pair(const ActuatorSplit& split) {
  const LambdaPair lam = lambda_pair(split);
  const double w_min = split.w_box().lower[0];
  const double w_max = split.w_box().upper[0];
  RPair out;
  out.r_plus = closed_form(w_min, w_max, lam.plus, +1, "r(C)", out.diagnostics);
  out.r_minus = closed_form(w_max, w_min, lam.minus, -1, "r(-C)", out.diagnostics);
  return out;
}

ResilienceReport quantitative_resilience(const ActuatorSplit& split, int order) {
  require_single_loss(split, "quantitative_resilience");
  if (order < 1) throw ArgumentError("integrator order must be >= 1");
  ResilienceReport rep;
  rep.lost_column = split.lost_columns()[0];
  rep.order = order;
  rep.controllable = check_controllability(split.base());

  if (split.c().col(0).isZero(0.0)) {
    rep.lambda_plus = rep.lambda_minus = ExtendedReal::infinity();
    rep.r_plus = rep.r_minus = 1.0;
    rep.resilient = rep.controllable;
    rep.r_q = rep.resilient ? 1.0 : 0.0;
    rep.r_kq = rep.r_q;
    rep.diagnostics.push_back("lost column is zero");
    if (!rep.controllable) rep.diagnostics.push_back("system not controllable");
    return rep;
  }

  const LambdaPair lam = lambda_pair(split);
  rep.lambda_plus = lam.plus;
  rep.lambda_minus = lam.minus;
  RPair r = r_pair(split);
  rep.r_plus = r.r_plus;
  rep.r_minus = r.r_minus;
  rep.diagnostics = std::move(r.diagnostics);

  if (!rep.controllable) {
    rep.diagnostics.push_back("system not controllable");
  } else {
    rep.resilient = in_unit_interval(rep.r_plus) && in_unit_interval(rep.r_minus);
    const double lo = std::min(rep.r_plus, rep.r_minus);
    if (!rep.resilient && std::abs(lo) <= kMembershipTol)
      rep.diagnostics.push_back("r on the boundary 0, treated as not resilient");
  }
  rep.r_q = rep.resilient ? std::min(1.0, std::min(rep.r_plus, rep.r_minus)) : 0.0;
  rep.r_kq = std::pow(rep.r_q, 1.0 / order);
  return rep;
}

ReachTimeVerdict resilience_via_reach_times(const ActuatorSplit& split) {
  require_single_loss(split, "resilience_via_reach_times");
  const Eigen::VectorXd c = split.c().col(0);
  if (c.isZero(0.0)) throw ArgumentError("resilience_via_reach_times: lost column is zero");

  ReachTimeVerdict v;
  const Direction plus(c), minus(Eigen::VectorXd(-c));
  v.nominal_plus = reach::nominal_reach_time(split.base(), plus).time;
  v.nominal_minus = reach::nominal_reach_time(split.base(), minus).time;
  v.malfunction_plus = reach::malfunctioning_reach_time(split, plus).time;
  v.malfunction_minus = reach::malfunctioning_reach_time(split, minus).time;
  v.controllable = check_controllability(split.base());

  auto ratio = [](ExtendedReal tn, ExtendedReal tm) {
    if (!tn.is_finite() || !tm.is_finite() || tm.value() <= 0.0) return 0.0;
    return tn.value() / tm.value();
  };
  const double rp = ratio(v.nominal_plus, v.malfunction_plus);
  const double rm = ratio(v.nominal_minus, v.malfunction_minus);
  v.resilient = v.controllable && in_unit_interval(rp) && in_unit_interval(rm);
  v.worst_ratio = v.resilient ? std::min(rp, rm) : 0.0;
  return v;
}

bool polytope_containment_check(const ActuatorSplit& split) {
  const Eigen::MatrixXd& b = split.b();
  const InputBox& box = split.u_box();
  const Eigen::Index n = b.rows();
  const auto p = static_cast<int>(split.lost_count());
  if (p > reach::kDefaultMaxLost)
    throw CapacityError("polytope_containment_check: too many lost columns");

  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      row += std::abs(b(i, j)) * std::max(std::abs(box.lower[j]), std::abs(box.upper[j]));
    scale = std::max(scale, row);
  }
  if (scale == 0.0) return false;
  const double eps = 1e-7 * scale;

  lp::LpProblem prob;
  prob.objective = Eigen::VectorXd::Zero(b.cols());
  prob.eq_matrix = b;
  prob.lower = box.lower;
  prob.upper = box.upper;

  const std::uint64_t count = std::uint64_t{1} << p;
  for (std::uint64_t v = 0; v < count; ++v) {
    const Eigen::VectorXd target = -(split.c() * reach::box_vertex(split.w_box(), v));
    for (Eigen::Index j = 0; j < n; ++j) {
      for (double s : {1.0, -1.0}) {
        prob.eq_rhs = target;
        prob.eq_rhs[j] += s * eps;
        if (lp::solve(prob).status != lp::LpStatus::Optimal) return false;
      }
    }
  }
  return true;
}

}  // namespace qres::resilience
