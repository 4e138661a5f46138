#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qres/catalog.hpp"
#include "qres/model.hpp"

namespace qres::sim {

/// Sampled trajectory of x^(k) = B_bar u. Each state stacks x, x', ..., x^(k-1).
struct Trajectory {
  Eigen::Index state_dim = 0;
  int order = 1;
  std::vector<std::string> input_labels;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> inputs;

  /// Header "t", x1..xn, x1_d1.. for derivatives, then one column per input.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

  /// First time the projection of derivative `level` onto the unit vector of
  /// `d` reaches `target`, linearly interpolated between samples.
  std::optional<double> first_crossing(const Eigen::VectorXd& d, double target, int level = 0) const;
};

/// Piecewise-constant command: `command` applies from `start` until the next segment.
struct CommandSegment {
  double start = 0.0;
  Eigen::VectorXd command;
};

/// Exact propagation under a constant input from rest at x0 (zero derivatives).
/// Samples on the dt grid plus the horizon. Throws ArgumentError for u outside the box.
Trajectory integrate_constant(const IntegratorSystem& sys, const Eigen::VectorXd& u, double horizon,
                              double dt, const std::optional<Eigen::VectorXd>& x0 = std::nullopt);

/// Early termination and thinning for lag runs.
struct LagRunOptions {
  // Checked after every step; the run ends at the first step where it holds.
  std::function<bool(double t, const Eigen::VectorXd& state)> stop;
  // Record one sample per this many grid steps. The final sample and the one
  // before a stop are always recorded.
  std::size_t record_every = 1;
};

/// Exact propagation with first-order input lag u' = (u_c - u)/tau from rest.
/// The lag state starts at `u0` (zero when omitted). Requires dt <= tau/10 and
/// commands inside the box; the first segment must start at 0.
Trajectory integrate_with_lag(const IntegratorSystem& sys, const std::vector<CommandSegment>& schedule,
                              double tau, double horizon, double dt,
                              const std::optional<Eigen::VectorXd>& x0 = std::nullopt,
                              const std::optional<Eigen::VectorXd>& u0 = std::nullopt,
                              const LagRunOptions& options = {});

/// j-fold iterated integral of exp(-s/tau) over [0, t].
double iterated_exponential(int j, double t, double tau);

struct ScenarioRun {
  Trajectory nominal;
  Trajectory malfunctioning;
  double nominal_time = 0.0;
  double malfunctioning_time = 0.0;
  double ratio() const { return malfunctioning_time / nominal_time; }
};

struct SmoothReachResult {
  ScenarioRun bang;
  ScenarioRun smooth;
  double ratio_bangbang = 0.0;
  double ratio_smooth = 0.0;
  double tau = 0.0;
};

/// Velocity-level octocopter, propeller 1 lost, worst constant w against the
/// best constant command along d. Times are first crossings of `target_speed`
/// without lag (bang) and with lag `tau` (smooth). dt defaults to tau/100, or
/// tau/10 when tau < 1e-3 to bound the step count.
/// Throws NonReachError if a run misses the target within 100x its expected time.
SmoothReachResult smooth_reach_ratio(const catalog::OctocopterParams& params, const Eigen::VectorXd& d,
                                     double target_speed, std::optional<double> dt = std::nullopt,
                                     std::optional<double> tau = std::nullopt);

}  // namespace qres::sim
