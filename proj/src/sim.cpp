#include "qres/sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qres/errors.hpp"
#include "qres/reach.hpp"

namespace qres::sim {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Trajectory empty_like(const IntegratorSystem& sys) {
  Trajectory tr;
  tr.state_dim = sys.state_dim();
  tr.order = sys.order();
  tr.input_labels = sys.labels();
  if (tr.input_labels.empty())
    for (Eigen::Index j = 0; j < sys.input_dim(); ++j) tr.input_labels.push_back("u" + std::to_string(j + 1));
  return tr;
}

Eigen::VectorXd initial_stack(const IntegratorSystem& sys, const std::optional<Eigen::VectorXd>& x0) {
  const Eigen::Index n = sys.state_dim();
  Eigen::VectorXd stack = Eigen::VectorXd::Zero(n * sys.order());
  if (x0) {
    if (x0->size() != n) throw ArgumentError("initial state has the wrong dimension");
    stack.head(n) = *x0;
  }
  return stack;
}

void check_grid(double horizon, double dt) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ArgumentError("horizon must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("dt must be positive");
}

void check_input(const IntegratorSystem& sys, const Eigen::VectorXd& u, const char* what) {
  if (u.size() != sys.input_dim() || !sys.box().contains(u, 1e-9))
    throw ArgumentError(std::string(what) + " lies outside the input box");
}

// Sample grid 0, dt, 2 dt, ..., horizon without a near-duplicate endpoint.
std::vector<double> sample_grid(double horizon, double dt) {
  std::vector<double> t;
  const auto steps = static_cast<long long>(std::floor(horizon / dt + 1e-9));
  for (long long i = 0; i <= steps; ++i) t.push_back(static_cast<double>(i) * dt);
  if (horizon - t.back() > 1e-9 * dt) t.push_back(horizon);
  else t.back() = horizon;
  return t;
}

}  // namespace

std::string Trajectory::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "t";
  for (int l = 0; l < order; ++l)
    for (Eigen::Index i = 0; i < state_dim; ++i) {
      out << ",x" << (i + 1);
      if (l > 0) out << "_d" << l;
    }
  for (const auto& label : input_labels) out << "," << label;
  out << "\n";
  for (std::size_t s = 0; s < times.size(); ++s) {
    out << times[s];
    for (Eigen::Index i = 0; i < states[s].size(); ++i) out << "," << states[s][i];
    for (Eigen::Index i = 0; i < inputs[s].size(); ++i) out << "," << inputs[s][i];
    out << "\n";
  }
  return out.str();
}

void Trajectory::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trajectory file '" + path.string() + "'");
  out << to_csv();
}

std::optional<double> Trajectory::first_crossing(const Eigen::VectorXd& d, double target, int level) const {
  if (d.size() != state_dim || d.norm() == 0.0) throw ArgumentError("first_crossing: bad direction");
  if (level < 0 || level >= order) throw ArgumentError("first_crossing: level out of range");
  const Eigen::VectorXd unit = d / d.norm();
  double prev = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double val = unit.dot(states[s].segment(level * state_dim, state_dim));
    if (val >= target) {
      if (s == 0) return times[0];
      const double frac = (target - prev) / (val - prev);
      return times[s - 1] + frac * (times[s] - times[s - 1]);
    }
    prev = val;
  }
  return std::nullopt;
}

double iterated_exponential(int j, double t, double tau) {
  if (j < 0) throw ArgumentError("iterated_exponential: j must be nonnegative");
  const double x = t / tau;
  if (j == 0) return std::exp(-x);
  if (x < 1.0) {
    // t^j sum_m (-x)^m / (j+m)!
    double term = 1.0 / factorial(j);
    double sum = term;
    for (int m = 1; m < 60; ++m) {
      term *= -x / (j + m);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::pow(t, j) * sum;
  }
  // (-tau)^j [exp(-x) - sum_{i<j} (-x)^i / i!]
  double partial = 0.0, term = 1.0;
  for (int i = 0; i < j; ++i) {
    partial += term;
    term *= -x / (i + 1);
  }
  return std::pow(-tau, j) * (std::exp(-x) - partial);
}

Trajectory integrate_constant(const IntegratorSystem& sys, const Eigen::VectorXd& u, double horizon,
                              double dt, const std::optional<Eigen::VectorXd>& x0) {
  check_grid(horizon, dt);
  check_input(sys, u, "constant input");
  const Eigen::Index n = sys.state_dim();
  const int k = sys.order();
  const Eigen::VectorXd start = initial_stack(sys, x0);
  const Eigen::VectorXd accel = sys.b_bar() * u;

  Trajectory tr = empty_like(sys);
  for (double t : sample_grid(horizon, dt)) {
    Eigen::VectorXd stack = start;
    for (int l = 0; l < k; ++l) stack.segment(l * n, n) += accel * (std::pow(t, k - l) / factorial(k - l));
    tr.times.push_back(t);
    tr.states.push_back(std::move(stack));
    tr.inputs.push_back(u);
  }
  return tr;
}

Trajectory integrate_with_lag(const IntegratorSystem& sys, const std::vector<CommandSegment>& schedule,
                              double tau, double horizon, double dt,
                              const std::optional<Eigen::VectorXd>& x0,
                              const std::optional<Eigen::VectorXd>& u0,
                              const LagRunOptions& options) {
  check_grid(horizon, dt);
  if (options.record_every == 0) throw ArgumentError("record_every must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ArgumentError("tau must be positive");
  if (dt > tau / 10.0 * (1.0 + 1e-12))
    throw ArgumentError("dt must not exceed tau/10 (dt = " + std::to_string(dt) +
                        ", tau = " + std::to_string(tau) + ")");
  if (schedule.empty() || schedule.front().start != 0.0)
    throw ArgumentError("command schedule must start at t = 0");
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    check_input(sys, schedule[s].command, "command");
    if (s > 0 && !(schedule[s].start > schedule[s - 1].start))
      throw ArgumentError("command schedule start times must increase");
  }

  const Eigen::Index n = sys.state_dim();
  const int k = sys.order();
  const Eigen::MatrixXd& m = sys.b_bar();
  Eigen::VectorXd x = initial_stack(sys, x0);
  Eigen::VectorXd u = u0 ? *u0 : Eigen::VectorXd::Zero(sys.input_dim());
  if (u.size() != sys.input_dim()) throw ArgumentError("initial lag state has the wrong dimension");

  // Advance (x, u) by h under the constant command c.
  auto advance = [&](const Eigen::VectorXd& c, double h) {
    const Eigen::VectorXd steady = m * c;
    const Eigen::VectorXd transient = m * (u - c);
    Eigen::VectorXd next(x.size());
    for (int l = 0; l < k; ++l) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (int i = l; i < k; ++i) v += x.segment(i * n, n) * (std::pow(h, i - l) / factorial(i - l));
      v += steady * (std::pow(h, k - l) / factorial(k - l));
      v += transient * iterated_exponential(k - l, h, tau);
      next.segment(l * n, n) = v;
    }
    x = std::move(next);
    u = c + (u - c) * std::exp(-h / tau);
  };

  Trajectory tr = empty_like(sys);
  tr.times.push_back(0.0);
  tr.states.push_back(x);
  tr.inputs.push_back(u);

  auto record = [&](double t) {
    tr.times.push_back(t);
    tr.states.push_back(x);
    tr.inputs.push_back(u);
  };

  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  const bool ragged_end = horizon - static_cast<double>(steps) * dt > 1e-9 * dt;
  const std::size_t count = steps + (ragged_end ? 1 : 0);
  std::size_t seg = 0;
  double now = 0.0;
  for (std::size_t s = 1; s <= count; ++s) {
    const bool last = s == count;
    const double target = last ? horizon : static_cast<double>(s) * dt;
    const double prev_t = now;
    const Eigen::VectorXd prev_x = x, prev_u = u;
    while (now < target) {
      while (seg + 1 < schedule.size() && schedule[seg + 1].start <= now) ++seg;
      double until = target;
      if (seg + 1 < schedule.size()) until = std::min(until, schedule[seg + 1].start);
      advance(schedule[seg].command, until - now);
      now = until;
    }
    const bool stop = options.stop && options.stop(target, x);
    if (stop && tr.times.back() != prev_t) {
      tr.times.push_back(prev_t);
      tr.states.push_back(prev_x);
      tr.inputs.push_back(prev_u);
    }
    if (stop || last || s % options.record_every == 0) record(target);
    if (stop) break;
  }
  return tr;
}

SmoothReachResult smooth_reach_ratio(const catalog::OctocopterParams& params, const Eigen::VectorXd& d,
                                     double target_speed, std::optional<double> dt,
                                     std::optional<double> tau) {
  if (!(target_speed > 0.0) || !std::isfinite(target_speed))
    throw ArgumentError("target speed must be positive");
  const double lag = tau.value_or(params.tau);
  if (!(lag > 0.0)) throw ArgumentError("tau must be positive");
  const double step = dt.value_or(lag < 1e-3 ? lag / 10.0 : lag / 100.0);

  const IntegratorSystem sys = catalog::octocopter_translational(params, 0.0, 1);
  const ActuatorSplit sp = split(sys, {0});
  const Direction dir(d);
  if (dir.is_zero()) throw ArgumentError("direction must be nonzero");

  const auto nominal = reach::nominal_reach_time(sys, dir);
  const auto malf = reach::malfunctioning_reach_time(sp, dir);
  if (!nominal.time.is_finite() || !malf.time.is_finite())
    throw NonReachError("target speed is not reachable along this direction",
                        std::numeric_limits<double>::infinity());
  const Eigen::VectorXd u_nom = *nominal.optimizer_u;
  const Eigen::VectorXd u_malf = sp.merge_inputs(*malf.optimizer_u, *malf.optimizer_w);

  const Eigen::VectorXd unit = d / d.norm();
  // Reach times are per unit of |d|; the target is a speed along d.
  const double scale = target_speed / d.norm();
  const double expect_nom = nominal.time.value() * scale;
  const double expect_malf = malf.time.value() * scale;

  auto crossing = [&](const Trajectory& tr, double horizon) {
    auto t = tr.first_crossing(d, target_speed);
    if (!t) throw NonReachError("target speed not reached within the horizon", horizon);
    return *t;
  };
  auto run = [&](bool smooth) {
    ScenarioRun r;
    const double h_nom = 100.0 * expect_nom, h_malf = 100.0 * expect_malf;
    if (smooth) {
      LagRunOptions opt;
      opt.stop = [&](double, const Eigen::VectorXd& x) { return unit.dot(x) >= target_speed; };
      // About 10^4 recorded rows per expected reach time.
      opt.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(expect_nom / step / 1e4));
      r.nominal = integrate_with_lag(sys, {{0.0, u_nom}}, lag, h_nom, step, std::nullopt, std::nullopt, opt);
      r.malfunctioning =
          integrate_with_lag(sys, {{0.0, u_malf}}, lag, h_malf, step, std::nullopt, std::nullopt, opt);
    } else {
      // Constant forcing gives linear velocity, so interpolation is exact on any grid.
      r.nominal = integrate_constant(sys, u_nom, h_nom, expect_nom / 100.0);
      r.malfunctioning = integrate_constant(sys, u_malf, h_malf, expect_nom / 100.0);
    }
    r.nominal_time = crossing(r.nominal, h_nom);
    r.malfunctioning_time = crossing(r.malfunctioning, h_malf);
    return r;
  };

  SmoothReachResult out;
  out.tau = lag;
  out.bang = run(false);
  out.smooth = run(true);
  out.ratio_bangbang = out.bang.ratio();
  out.ratio_smooth = out.smooth.ratio();
  return out;
}

}  // namespace qres::sim
