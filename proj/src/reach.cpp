#include "qres/reach.hpp"

#include <cmath>

#include "qres/errors.hpp"
#include "qres/lp.hpp"

namespace qres::reach {

namespace {

void check_order(int order) {
  if (order < 1) throw ArgumentError("integrator order must be >= 1");
}

void check_direction(const Direction& d, Eigen::Index n) {
  if (d.size() != n)
    throw ArgumentError("direction has " + std::to_string(d.size()) + " components, system has " +
                        std::to_string(n) + " states");
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

ExtendedReal order_k_time(ExtendedReal first_order_time, int order) {
  check_order(order);
  if (!first_order_time.is_finite()) return first_order_time;
  if (order == 1) return first_order_time;
  return ExtendedReal(std::pow(factorial(order) * first_order_time.value(), 1.0 / order));
}

Eigen::VectorXd box_vertex(const InputBox& box, std::uint64_t index) {
  const Eigen::Index p = box.size();
  Eigen::VectorXd v(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const bool upper = (index >> (p - 1 - j)) & 1u;
    v[j] = upper ? box.upper[j] : box.lower[j];
  }
  return v;
}

ReachResult nominal_reach_time(const IntegratorSystem& sys, const Direction& d, int order) {
  check_order(order);
  check_direction(d, sys.state_dim());
  ReachResult out;
  out.order = order;
  if (d.is_zero()) {
    out.time = ExtendedReal(0.0);
    out.optimizer_u = Eigen::VectorXd(sys.u_min().cwiseMax(0.0).cwiseMin(sys.u_max()));
    return out;
  }
  const auto speed = lp::max_scaled_direction(sys.b_bar(), sys.box(), d.vector());
  if (!speed.is_positive()) {
    out.time = ExtendedReal::infinity();
    return out;
  }
  if (speed.kind == lp::DirectionalSpeed::Kind::Unbounded) {
    // Only possible for a zero direction, which was handled above.
    out.time = ExtendedReal(0.0);
    return out;
  }
  out.time = order_k_time(ExtendedReal(1.0 / speed.lambda.value()), order);
  out.optimizer_u = speed.argument;
  return out;
}

ReachResult malfunction_reach_for_w(const ActuatorSplit& split, const Eigen::VectorXd& w,
                                    const Direction& d, int order) {
  check_order(order);
  check_direction(d, split.base().state_dim());
  if (d.is_zero()) throw ArgumentError("malfunction_time_for_w: direction must be nonzero");
  if (!split.w_box().contains(w, 1e-9))
    throw ArgumentError("malfunction_time_for_w: w lies outside W_c");

  ReachResult out;
  out.order = order;
  out.optimizer_w = w;
  const Eigen::VectorXd cw = split.c() * w;
  const auto speed = lp::max_scaled_direction(split.b(), split.u_box(), d.vector(), cw);
  // The zero test is measured against the full system so that it does not
  // depend on how the columns were partitioned.
  const double threshold =
      std::max(speed.threshold, lp::speed_threshold(split.base().b_bar(), split.base().box(), d.vector()));
  if (speed.kind != lp::DirectionalSpeed::Kind::Finite || !(speed.lambda.value() > threshold)) {
    out.time = ExtendedReal::infinity();
    return out;
  }
  out.time = order_k_time(ExtendedReal(1.0 / speed.lambda.value()), order);
  out.optimizer_u = speed.argument;
  return out;
}

ExtendedReal malfunction_time_for_w(const ActuatorSplit& split, const Eigen::VectorXd& w,
                                    const Direction& d, int order) {
  return malfunction_reach_for_w(split, w, d, order).time;
}

ReachResult malfunctioning_reach_time(const ActuatorSplit& split, const Direction& d, int order,
                                      int max_lost) {
  check_order(order);
  check_direction(d, split.base().state_dim());
  const auto p = static_cast<int>(split.lost_count());
  if (p > max_lost || p > 62)
    throw CapacityError("malfunctioning_reach_time: " + std::to_string(p) +
                        " lost columns exceed the vertex-enumeration cap of " + std::to_string(max_lost));
  ReachResult out;
  out.order = order;
  if (d.is_zero()) {
    out.time = ExtendedReal(0.0);
    return out;
  }

  const std::uint64_t count = std::uint64_t{1} << p;
  std::optional<ReachResult> best;
  std::uint64_t best_index = 0;
  for (std::uint64_t v = 0; v < count; ++v) {
    ReachResult r = malfunction_reach_for_w(split, box_vertex(split.w_box(), v), d, 1);
    if (!r.time.is_finite()) {
      best = std::move(r);
      best_index = v;
      break;
    }
    // Strictly larger (beyond rounding) replaces; ties keep the lower index.
    if (!best || r.time.value() > best->time.value() * (1.0 + 1e-12)) {
      best = std::move(r);
      best_index = v;
    }
  }
  out.time = order_k_time(best->time, order);
  out.optimizer_w = best->optimizer_w;
  out.worst_vertex = static_cast<int>(best_index);
  if (out.time.is_finite()) out.optimizer_u = best->optimizer_u;
  return out;
}

ExtendedReal time_ratio(const ActuatorSplit& split, const Direction& d, int order, int max_lost) {
  if (d.is_zero()) return ExtendedReal(1.0);
  const ReachResult m = malfunctioning_reach_time(split, d, order, max_lost);
  if (!m.time.is_finite()) return ExtendedReal::infinity();
  const ReachResult n = nominal_reach_time(split.base(), d, order);
  if (!n.time.is_finite()) return ExtendedReal::infinity();
  return ExtendedReal(m.time.value() / n.time.value());
}

}  // namespace qres::reach
