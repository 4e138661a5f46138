// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qres/catalog.hpp"
#include "qres/oracle.hpp"
#include "qres/reach.hpp"
#include "qres/resilience.hpp"
#include "qres/sim.hpp"
#include "support.hpp"

using namespace qres;
using qres::testing::vec;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

bool within(double got, double want, double tol) { return std::abs(got - want) <= tol; }

Outcome crit_spacecraft_rmin() {
  const auto start = Clock::now();
  const auto sc = catalog::spacecraft_printed();
  const std::vector<double> want{-0.2, 0.34, 0.9, -0.004, -0.38, 0.15, 0.83, -0.32, 0.71, -0.06, 0.24, 0.2, -0.5, 0.5};
  std::vector<double> got;
  bool ok = true;
  for (int j = 0; j < 14; ++j) {
    const auto rp = resilience::r_pair(split(sc, {j}));
    got.push_back(std::min(rp.r_plus, rp.r_minus));
    ok = ok && within(got.back(), want[static_cast<std::size_t>(j)], 0.01);
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 1.0;
  return {ok, "r_min = " + fmt(got) + " in " + fmt(elapsed) + " s"};
}

Outcome crit_spacecraft_rq() {
  const auto sc = catalog::spacecraft_printed();
  const std::vector<double> want{0, 0.34, 0.9, 0, 0, 0.15, 0.83, 0, 0.71, 0, 0.24, 0.2, 0, 0.5};
  std::vector<double> got;
  bool ok = true;
  for (int j = 0; j < 14; ++j) {
    got.push_back(resilience::quantitative_resilience(split(sc, {j})).r_q);
    const double w = want[static_cast<std::size_t>(j)];
    ok = ok && (w == 0.0 ? got.back() == 0.0 : within(got.back(), w, 0.01));
  }
  return {ok, "r_q = " + fmt(got)};
}

Outcome crit_spacecraft_ratios() {
  const auto sc = catalog::spacecraft_printed();
  const Direction d(vec({667, 0.067, 2, 2, 2, 2}));
  const std::vector<double> want{1.1, 1.2, 1.1, 1, INFINITY, 1, 151.1, INFINITY, 151.1, INFINITY, 151.1, 151.1,
                                 INFINITY, 151.1};
  std::vector<double> got;
  bool ok = true;
  for (int j = 0; j < 14; ++j) {
    const double t = reach::time_ratio(split(sc, {j}), d).value();
    got.push_back(t);
    const double w = want[static_cast<std::size_t>(j)];
    if (std::isinf(w)) ok = ok && std::isinf(t) && t > 0;
    else ok = ok && within(t, w, w > 100 ? 0.5 : 0.05);
  }
  return {ok, "t(d) = " + fmt(got)};
}

Outcome crit_octo_rotational() {
  const auto rot = catalog::octocopter_rotational();
  std::vector<double> rq, r2q;
  bool ok = true;
  for (int j = 0; j < 8; ++j) {
    const ActuatorSplit sp = split(rot, {j});
    rq.push_back(resilience::quantitative_resilience(sp, 1).r_q);
    r2q.push_back(resilience::quantitative_resilience(sp, 2).r_kq);
    ok = ok && within(rq.back(), 0.1, 0.005) && within(r2q.back(), std::sqrt(0.1), 0.01);
  }
  return {ok, "r_q = " + fmt(rq) + ", r_2q = " + fmt(r2q)};
}

Outcome crit_octo_translational() {
  const auto tr = catalog::octocopter_translational();
  bool ok = true;
  std::ostringstream detail;
  for (int j = 0; j < 8; ++j) {
    const ActuatorSplit sp = split(tr, {j});
    const auto rp = resilience::r_pair(sp);
    const double r2 = resilience::quantitative_resilience(sp, 2).r_kq;
    if (j < 4)
      ok = ok && within(rp.r_plus, 0.7657, 1e-3) && within(rp.r_minus, 0.5638, 1e-3) && within(r2, 0.75, 0.01);
    else
      ok = ok && rp.r_plus == 0.0 && rp.r_minus == 0.0;
    detail << (j ? "; " : "") << j + 1 << ": " << fmt(rp.r_plus) << "/" << fmt(rp.r_minus) << "/" << fmt(r2);
  }
  return {ok, "r(C)/r(-C)/r_2q " + detail.str()};
}

Outcome crit_octo_ratios() {
  const auto tr = catalog::octocopter_translational();
  std::vector<double> down, side;
  bool ok = true;
  for (int j = 0; j < 8; ++j) {
    const ActuatorSplit sp = split(tr, {j});
    down.push_back(reach::time_ratio(sp, Direction(vec({0, 0, -1}))).value());
    side.push_back(reach::time_ratio(sp, Direction(vec({1, 0, 0}))).value());
    ok = ok && within(down.back(), j < 4 ? 1.7738 : 2.2644, 1e-3);
    if (j == 4 || j == 5) ok = ok && std::isinf(side.back());
    else ok = ok && within(side.back(), 1.0, 1e-6);
  }
  return {ok, "t(0,0,-1) = " + fmt(down) + ", t(1,0,0) = " + fmt(side)};
}

Outcome crit_smooth_ordering() {
  const Eigen::VectorXd d = vec({0, 0, -1});
  const catalog::OctocopterParams params;
  const auto base = sim::smooth_reach_ratio(params, d, 1.0, std::nullopt, 0.1);
  const double bang = base.ratio_bangbang;
  const double t_d = reach::time_ratio(split(catalog::octocopter_translational(params), {0}), Direction(d)).value();
  bool ok = within(bang, 1.7738, 1e-3) && within(bang, t_d, 1e-3);
  ok = ok && base.ratio_smooth >= 1.0 && base.ratio_smooth < bang;
  std::vector<double> smooth;
  for (double tau : {0.2, 0.1, 0.05, 0.01}) smooth.push_back(sim::smooth_reach_ratio(params, d, 1.0, std::nullopt, tau).ratio_smooth);
  for (std::size_t i = 1; i < smooth.size(); ++i) ok = ok && smooth[i] > smooth[i - 1] && smooth[i] < bang;
  const double tiny = sim::smooth_reach_ratio(params, d, 1.0, std::nullopt, 1e-4).ratio_smooth;
  ok = ok && within(tiny, bang, 1e-3);
  return {ok, "bang = " + fmt(bang) + ", smooth(tau 0.2..0.01) = " + fmt(smooth) + ", smooth(1e-4) = " + fmt(tiny)};
}

Outcome crit_oracles() {
  const auto start = Clock::now();
  double worst = 0.0, worst_h = 0.0;
  int grids = 0, scans = 0;
  const std::vector<double> scales{0.5, 2, 10};

  struct GridCase {
    ActuatorSplit split;
    std::vector<Eigen::VectorXd> dirs;
  };
  const auto rot = catalog::octocopter_rotational();
  const auto tr = catalog::octocopter_translational();
  std::vector<GridCase> cases{
      {split(testing::toy1(), {2}), {vec({1, 0}), vec({-1, 0}), vec({0.3, 0.8})}},
      {split(testing::toy2(), {1}), {vec({1}), vec({-1})}},
      {split(testing::toy3(), {2, 3}), {vec({1, 0}), vec({0.6, -0.2}), vec({-1, 1})}},
      {split(rot, {0}), {vec({1, 0, 0}), vec({-1, 0.5, 1}), vec({0, 0, 1})}},
      {split(tr, {0}), {vec({0, 0, -1}), vec({0, 0, 1}), vec({1, 0, 0}), vec({0.2, -0.5, 0.7})}},
  };
  for (const auto& c : cases) {
    const int points = c.split.lost_count() == 1 ? 51 : 21;
    for (const auto& d : c.dirs) {
      worst = std::max(worst, oracle::grid_worst_w(c.split, Direction(d), points).max_violation);
      worst_h = std::max(worst_h, oracle::homogeneity_probe(c.split, Direction(d), scales));
      ++grids;
    }
  }

  std::vector<IntegratorSystem> systems{testing::toy1(), testing::toy2(), testing::toy3(), rot, tr,
                                        catalog::spacecraft_printed()};
  for (const auto& sys : systems) {
    for (int j = 0; j < static_cast<int>(sys.input_dim()); ++j) {
      const ActuatorSplit sp = split(sys, {j});
      if (!resilience::quantitative_resilience(sp).resilient) continue;
      worst = std::max(worst, oracle::direction_scan(sp, 2000, 20240601u + static_cast<unsigned>(j)).max_violation);
      ++scans;
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = worst <= 1e-9 && worst_h <= 1e-8 && elapsed < 30.0;
  return {ok, std::to_string(grids) + " grid checks, " + std::to_string(scans) +
                  " direction scans: max violation " + fmt(worst) + ", homogeneity error " + fmt(worst_h) + ", " +
                  fmt(elapsed) + " s"};
}

Outcome crit_cross_check() {
  std::vector<IntegratorSystem> systems{testing::toy1(), testing::toy2(), testing::toy3(),
                                        catalog::spacecraft_printed(), catalog::octocopter_rotational(),
                                        catalog::octocopter_translational(),
                                        catalog::spacecraft_bbar(catalog::OrbitalElements::raising_initial())};
  int splits = 0, disagreements = 0;
  double worst_rel = 0.0;
  for (const auto& sys : systems) {
    for (int j = 0; j < static_cast<int>(sys.input_dim()); ++j) {
      const ActuatorSplit sp = split(sys, {j});
      const auto rep = resilience::quantitative_resilience(sp);
      const auto verdict = resilience::resilience_via_reach_times(sp);
      ++splits;
      if (rep.resilient != verdict.resilient) ++disagreements;
      if (!rep.resilient || sp.c().isZero(0.0)) continue;
      const Eigen::VectorXd c = sp.c().col(0);
      const double t = std::max(reach::time_ratio(sp, Direction(c)), reach::time_ratio(sp, Direction(Eigen::VectorXd(-c)))).value();
      worst_rel = std::max(worst_rel, std::abs(1.0 / rep.r_q - t) / t);
    }
  }
  const bool ok = disagreements == 0 && worst_rel <= 1e-8;
  return {ok, std::to_string(splits) + " splits, " + std::to_string(disagreements) +
                  " verdict disagreements, max relative gap " + fmt(worst_rel)};
}

Outcome crit_order_k() {
  const ActuatorSplit sp = split(testing::toy2(), {1});
  bool ok = true;
  std::vector<double> rk;
  for (int k : {1, 2, 3, 5}) {
    const double r = resilience::quantitative_resilience(sp, k).r_kq;
    rk.push_back(r);
    ok = ok && r == std::pow(0.5, 1.0 / k);
  }
  const Direction minus_c(Eigen::VectorXd(-sp.c().col(0)));
  const double t1 = reach::nominal_reach_time(testing::toy2(), minus_c).time.value();
  double worst = 0.0;
  for (int k : {1, 2, 3, 5}) {
    const double tk = reach::nominal_reach_time(testing::toy2(), minus_c, k).time.value();
    const double want = std::tgamma(k + 1.0) * t1;
    worst = std::max(worst, std::abs(std::pow(tk, k) - want) / want);
  }
  ok = ok && worst <= 1e-12;
  return {ok, "r_kq = " + fmt(rk) + ", max relative gap in T_k^k = k! T " + fmt(worst)};
}

}  // namespace

int main() {
  report(1, "spacecraft r_min", crit_spacecraft_rmin);
  report(2, "spacecraft r_q", crit_spacecraft_rq);
  report(3, "spacecraft t(d)", crit_spacecraft_ratios);
  report(4, "octocopter rotational r_q", crit_octo_rotational);
  report(5, "octocopter translational r", crit_octo_translational);
  report(6, "octocopter t(d)", crit_octo_ratios);
  report(7, "smooth vs bang-bang ordering", crit_smooth_ordering);
  report(8, "oracle suite", crit_oracles);
  report(9, "verdict cross-check", crit_cross_check);
  report(10, "order-k consistency", crit_order_k);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
