#pragma once

#include <optional>

#include <Eigen/Dense>

#include "qres/extended_real.hpp"
#include "qres/model.hpp"

namespace qres::reach {

/// Minimal reach time and the constant inputs attaining it.
struct ReachResult {
  ExtendedReal time;                         // seconds, +inf when unreachable
  std::optional<Eigen::VectorXd> optimizer_u;  // u_bar for nominal, u for malfunctioning
  std::optional<Eigen::VectorXd> optimizer_w;  // worst undesirable input (malfunctioning only)
  std::optional<int> worst_vertex;           // lexicographic index of optimizer_w
  int order = 1;
};

/// Default cap on the number of lost columns for vertex enumeration.
inline constexpr int kDefaultMaxLost = 20;

/// k-th order time from the first-order one: (k! * T)^(1/k).
ExtendedReal order_k_time(ExtendedReal first_order_time, int order);

/// Vertex `index` of a box, lexicographic with lower < upper and the first
/// coordinate most significant (index 0 is the all-lower vertex).
Eigen::VectorXd box_vertex(const InputBox& box, std::uint64_t index);

/// T_{k,N}*(d): shortest time for the full system to traverse d.
ReachResult nominal_reach_time(const IntegratorSystem& sys, const Direction& d, int order = 1);

/// T_{k,M}(w, d) for a fixed constant undesirable input w in W_c.
/// Throws ArgumentError for d = 0 or w outside W_c.
ExtendedReal malfunction_time_for_w(const ActuatorSplit& split, const Eigen::VectorXd& w,
                                    const Direction& d, int order = 1);

/// Same as malfunction_time_for_w but also returns the best controlled input.
ReachResult malfunction_reach_for_w(const ActuatorSplit& split, const Eigen::VectorXd& w,
                                    const Direction& d, int order = 1);

/// T_{k,M}*(d): the worst vertex of W_c against the best constant control.
/// Throws CapacityError when more than `max_lost` columns are lost.
ReachResult malfunctioning_reach_time(const ActuatorSplit& split, const Direction& d, int order = 1,
                                      int max_lost = kDefaultMaxLost);

/// t_k(d) = T_{k,M}*(d) / T_{k,N}*(d); 1 for d = 0, +inf whenever T_{k,M}* is.
ExtendedReal time_ratio(const ActuatorSplit& split, const Direction& d, int order = 1,
                        int max_lost = kDefaultMaxLost);

}  // namespace qres::reach
