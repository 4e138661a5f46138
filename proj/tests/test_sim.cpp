#include <doctest.h>

#include <cmath>

#include "qres/errors.hpp"
#include "qres/reach.hpp"
#include "qres/sim.hpp"
#include "support.hpp"

using namespace qres;
using qres::testing::vec;

namespace {

double fact(int k) { return std::tgamma(k + 1.0); }

// Cauchy form of the j-fold integral of exp(-s/tau), by composite Simpson.
double simpson_iterated(int j, double t, double tau) {
  const int n = 4000;
  const double h = t / n;
  auto f = [&](double s) { return std::pow(t - s, j - 1) * std::exp(-s / tau) / fact(j - 1); };
  double sum = f(0) + f(t);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

// Classical RK4 on (x, x', ..., x^(k-1), u) with u' = (c - u)/tau.
Eigen::VectorXd rk4_lag(const IntegratorSystem& sys, const std::vector<sim::CommandSegment>& schedule,
                        double tau, double horizon, int steps) {
  const Eigen::Index n = sys.state_dim(), m = sys.input_dim();
  const int k = sys.order();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n * k + m);
  auto command = [&](double t) {
    std::size_t s = 0;
    while (s + 1 < schedule.size() && schedule[s + 1].start <= t) ++s;
    return schedule[s].command;
  };
  auto rhs = [&](double t, const Eigen::VectorXd& z, const Eigen::VectorXd& c) {
    Eigen::VectorXd dz(z.size());
    for (int l = 0; l + 1 < k; ++l) dz.segment(l * n, n) = z.segment((l + 1) * n, n);
    dz.segment((k - 1) * n, n) = sys.b_bar() * z.tail(m);
    dz.tail(m) = (c - z.tail(m)) / tau;
    (void)t;
    return dz;
  };
  const double h = horizon / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    // Steps are aligned with the switching times, so c is constant within a step.
    const Eigen::VectorXd c = command(t + 0.5 * h);
    const Eigen::VectorXd k1 = rhs(t, y, c);
    const Eigen::VectorXd k2 = rhs(t + h / 2, y + h / 2 * k1, c);
    const Eigen::VectorXd k3 = rhs(t + h / 2, y + h / 2 * k2, c);
    const Eigen::VectorXd k4 = rhs(t + h, y + h * k3, c);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return y;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("constant input on toy systems") {
  const auto tr = sim::integrate_constant(testing::toy2(), vec({-1, 1}), 0.5, 0.1);
  REQUIRE(tr.times.size() == 6);
  CHECK(tr.times.back() == 0.5);
  CHECK(tr.states.back()[0] == doctest::Approx(-1.0));
  CHECK(tr.first_crossing(vec({-1}), 1.0).value() == doctest::Approx(0.5));

  const auto t2 = sim::integrate_constant(testing::toy2().with_order(2), vec({3, 0}), 2.0, 0.25);
  CHECK(t2.states.back()[0] == doctest::Approx(3.0 * 4.0 / 2.0));
  CHECK(t2.states.back()[1] == doctest::Approx(6.0));
  CHECK_THROWS_AS(sim::integrate_constant(testing::toy2(), vec({4, 0}), 1.0, 0.1), ArgumentError);
}

TEST_CASE("constant input is exact for random systems and orders") {
  testing::Gen gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = gen.integer(1, 4);
    const IntegratorSystem sys = gen.system().with_order(k);
    Eigen::VectorXd u(sys.input_dim());
    for (Eigen::Index j = 0; j < u.size(); ++j) u[j] = gen.uniform(sys.u_min()[j], sys.u_max()[j]);
    const double horizon = gen.uniform(0.5, 3.0);
    const auto tr = sim::integrate_constant(sys, u, horizon, 0.1);
    const Eigen::VectorXd a = sys.b_bar() * u;
    const Eigen::Index n = sys.state_dim();
    for (std::size_t s = 0; s < tr.times.size(); s += 3) {
      const double t = tr.times[s];
      for (int l = 0; l < k; ++l) {
        const Eigen::VectorXd expect = a * std::pow(t, k - l) / fact(k - l);
        CHECK((tr.states[s].segment(l * n, n) - expect).norm() <= 1e-12 * (1 + expect.norm()));
      }
    }
  }
}

TEST_CASE("iterated exponential") {
  for (double tau : {0.1, 1.0, 3.0})
    for (int j = 1; j <= 4; ++j)
      for (double x : {0.05, 0.5, 0.999, 1.0, 1.001, 3.0, 20.0}) {
        const double t = x * tau;
        const double got = sim::iterated_exponential(j, t, tau);
        CHECK(testing::close_rel(got, simpson_iterated(j, t, tau), 1e-9 * (1 + std::pow(t, j))));
      }
  CHECK(sim::iterated_exponential(0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(sim::iterated_exponential(1, 0.0, 0.1) == 0.0);
}

TEST_CASE("lag state follows the first-order response") {
  Eigen::MatrixXd b(1, 1);
  b << 1;
  const auto sys = IntegratorSystem::make("lag", 1, b, vec({-1}), vec({1}));
  const auto tr = sim::integrate_with_lag(sys, {{0.0, vec({1})}}, 0.1, 0.4, 0.01);
  CHECK(tr.inputs.back()[0] == doctest::Approx(1 - std::exp(-4.0)).epsilon(1e-12));
  // x(t) = t - tau (1 - e^{-t/tau})
  CHECK(tr.states.back()[0] == doctest::Approx(0.4 - 0.1 * (1 - std::exp(-4.0))).epsilon(1e-12));
  CHECK_THROWS_AS(sim::integrate_with_lag(sys, {{0.0, vec({1})}}, 0.1, 0.4, 0.02), ArgumentError);
  CHECK_THROWS_AS(sim::integrate_with_lag(sys, {{0.1, vec({1})}}, 0.1, 0.4, 0.01), ArgumentError);
  CHECK_THROWS_AS(sim::integrate_with_lag(sys, {{0.0, vec({2})}}, 0.1, 0.4, 0.01), ArgumentError);
}

TEST_CASE("lag propagation matches RK4") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 10; ++trial) {
    const int k = gen.integer(1, 3);
    const IntegratorSystem sys = gen.system().with_order(k);
    std::vector<sim::CommandSegment> schedule;
    for (double start : {0.0, 0.25, 0.6}) {
      Eigen::VectorXd c(sys.input_dim());
      for (Eigen::Index j = 0; j < c.size(); ++j) c[j] = gen.uniform(sys.u_min()[j], sys.u_max()[j]);
      schedule.push_back({start, c});
    }
    const double tau = 0.05;
    const auto tr = sim::integrate_with_lag(sys, schedule, tau, 1.0, 0.005);
    const Eigen::VectorXd ref = rk4_lag(sys, schedule, tau, 1.0, 20000);
    const Eigen::Index len = sys.state_dim() * k;
    CHECK((tr.states.back() - ref.head(len)).norm() <= 1e-8 * (1 + ref.norm()));
    CHECK((tr.inputs.back() - ref.tail(sys.input_dim())).norm() <= 1e-8 * (1 + ref.norm()));
  }
}

TEST_CASE("lag trajectories approach the constant-input ones as tau shrinks") {
  const IntegratorSystem sys = testing::toy1().with_order(2);
  const Eigen::VectorXd u = vec({2, -1, 1});
  const auto exact = sim::integrate_constant(sys, u, 1.0, 1e-3);
  double prev = INFINITY;
  for (double tau : {0.2, 0.1, 0.05, 0.01}) {
    const auto lag = sim::integrate_with_lag(sys, {{0.0, u}}, tau, 1.0, 1e-3);
    REQUIRE(lag.times.size() == exact.times.size());
    double gap = 0.0;
    for (std::size_t s = 0; s < lag.times.size(); ++s) gap = std::max(gap, (lag.states[s] - exact.states[s]).norm());
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("simulated crossings reproduce reach times") {
  testing::Gen gen(64);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const IntegratorSystem sys = gen.system();
    const Eigen::VectorXd d = gen.direction(sys.state_dim());
    const auto nominal = reach::nominal_reach_time(sys, Direction(d));
    if (!nominal.time.is_finite()) continue;
    const double t = nominal.time.value();
    const double dt = t / 200;
    const auto tr = sim::integrate_constant(sys, *nominal.optimizer_u, 2 * t, dt);
    CHECK(std::abs(tr.first_crossing(d, d.norm()).value() - t) <= 2 * dt);
    CHECK((tr.states[200] - d).norm() <= 1e-9 * (1 + d.norm()));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("csv layout") {
  const auto tr = sim::integrate_constant(testing::toy1().with_order(2), vec({0, 0, 1}), 0.2, 0.1);
  const std::string csv = tr.to_csv();
  CHECK(csv.substr(0, csv.find('\n')) == "t,x1,x2,x1_d1,x2_d1,u1,u2,u3");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("smooth reach ratio") {
  const auto r = sim::smooth_reach_ratio({}, vec({0, 0, -1}), 1.0);
  CHECK(r.tau == 0.1);
  CHECK(r.ratio_bangbang > 1.0);
  CHECK(r.ratio_smooth >= 1.0);
  CHECK(r.ratio_smooth < r.ratio_bangbang);
  CHECK_THROWS_AS(sim::smooth_reach_ratio({}, vec({0, 0, 0}), 1.0), ArgumentError);
}

}
