#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qres/model.hpp"

namespace qres::testing {

inline IntegratorSystem toy1() {
  Eigen::MatrixXd b(2, 3);
  b << 1, 0, 1,
       0, 1, 0;
  Eigen::VectorXd lo(3), hi(3);
  lo << -2, -2, -1;
  hi << 2, 2, 1;
  return IntegratorSystem::make("toy1", 1, b, lo, hi);
}

inline IntegratorSystem toy2() {
  Eigen::MatrixXd b(1, 2);
  b << 1, -1;
  Eigen::VectorXd lo(2), hi(2);
  lo << -1, 0;
  hi << 3, 1;
  return IntegratorSystem::make("toy2", 1, b, lo, hi);
}

inline IntegratorSystem toy3() {
  Eigen::MatrixXd b(2, 4);
  b << 1, 0, 0.5, 0,
       0, 1, 0, 0.5;
  return IntegratorSystem::make("toy3", 1, b, Eigen::VectorXd::Constant(4, -1.0),
                                Eigen::VectorXd::Constant(4, 1.0));
}

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

/// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (rng_() & 1u) != 0; }

  Eigen::MatrixXd matrix(Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = uniform(-scale, scale);
    return m;
  }

  // Box with lo < hi. Some boxes contain 0 strictly, some touch it, some are symmetric.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> box(Eigen::Index m) {
    Eigen::VectorXd lo(m), hi(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      switch (integer(0, 3)) {
        case 0: lo[j] = -uniform(0.2, 2.0); hi[j] = uniform(0.2, 2.0); break;
        case 1: lo[j] = 0.0; hi[j] = uniform(0.5, 2.0); break;
        case 2: hi[j] = uniform(0.2, 2.0); lo[j] = -hi[j]; break;
        default: lo[j] = -uniform(0.0, 1.0); hi[j] = uniform(0.5, 3.0); break;
      }
    }
    return {lo, hi};
  }

  IntegratorSystem system(int n_min = 1, int n_max = 3, int extra_max = 3) {
    const int n = integer(n_min, n_max);
    const int m = n + integer(1, extra_max);
    auto [lo, hi] = box(m);
    return IntegratorSystem::make("random", 1, matrix(n, m), lo, hi);
  }

  Eigen::VectorXd direction(Eigen::Index n) {
    Eigen::VectorXd d(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i) d[i] = uniform(-1.0, 1.0);
    } while (d.norm() < 1e-3);
    return d;
  }

 private:
  std::mt19937_64 rng_;
};

struct BruteLp {
  bool feasible = false;
  double value = -INFINITY;
};

/// Maximum of c.x over {A x = b, lo <= x <= hi} by enumerating every basic
/// solution: each variable is at its lower bound, at its upper bound, or basic.
/// Bounds must be finite; intended for at most ~7 variables.
inline BruteLp brute_force_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double tol = 1e-9) {
  const Eigen::Index v = c.size();
  std::uint64_t combos = 1;
  for (Eigen::Index j = 0; j < v; ++j) combos *= 3;
  BruteLp best;
  const double scale = 1.0 + (a.size() ? a.cwiseAbs().maxCoeff() : 0.0) *
                                 std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff());
  for (std::uint64_t code = 0; code < combos; ++code) {
    std::uint64_t rest = code;
    std::vector<Eigen::Index> basic;
    Eigen::VectorXd x(v);
    for (Eigen::Index j = 0; j < v; ++j) {
      const int s = static_cast<int>(rest % 3);
      rest /= 3;
      if (s == 0) x[j] = lo[j];
      else if (s == 1) x[j] = hi[j];
      else basic.push_back(j);
    }
    if (static_cast<Eigen::Index>(basic.size()) > a.rows()) continue;
    Eigen::VectorXd rhs = b;
    for (Eigen::Index j = 0; j < v; ++j)
      if (std::find(basic.begin(), basic.end(), j) == basic.end()) rhs -= a.col(j) * x[j];
    if (!basic.empty()) {
      Eigen::MatrixXd ab(a.rows(), static_cast<Eigen::Index>(basic.size()));
      for (std::size_t k = 0; k < basic.size(); ++k) ab.col(static_cast<Eigen::Index>(k)) = a.col(basic[k]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(ab);
      lu.setThreshold(1e-10);
      if (lu.rank() < static_cast<Eigen::Index>(basic.size())) continue;
      const Eigen::VectorXd xb = ab.colPivHouseholderQr().solve(rhs);
      for (std::size_t k = 0; k < basic.size(); ++k) x[basic[k]] = xb[static_cast<Eigen::Index>(k)];
    }
    if (a.rows() > 0 && (a * x - b).cwiseAbs().maxCoeff() > tol * scale) continue;
    bool inside = true;
    for (Eigen::Index j = 0; j < v; ++j)
      if (x[j] < lo[j] - tol * scale || x[j] > hi[j] + tol * scale) inside = false;
    if (!inside) continue;
    best.feasible = true;
    best.value = std::max(best.value, c.dot(x));
  }
  return best;
}

/// max{lambda >= 0 : M x + offset = lambda d, x in box} by brute_force_lp, with lambda
/// capped far above any attainable value. Returns nullopt when infeasible.
inline std::optional<double> brute_speed(const Eigen::MatrixXd& m, const Eigen::VectorXd& lo,
                                         const Eigen::VectorXd& hi, const Eigen::VectorXd& d,
                                         const Eigen::VectorXd& offset = {}) {
  const Eigen::Index n = m.rows(), k = m.cols();
  double reach = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) row += std::abs(m(i, j)) * std::max(std::abs(lo[j]), std::abs(hi[j]));
    reach = std::max(reach, row);
  }
  if (offset.size()) reach += offset.cwiseAbs().maxCoeff();
  const double cap = 2.0 * reach / d.cwiseAbs().maxCoeff() + 1.0;
  Eigen::MatrixXd a(n, k + 1);
  a << m, -d;
  Eigen::VectorXd l(k + 1), h(k + 1), c = Eigen::VectorXd::Zero(k + 1);
  l << lo, 0.0;
  h << hi, cap;
  c[k] = 1.0;
  const Eigen::VectorXd rhs = offset.size() ? Eigen::VectorXd(-offset) : Eigen::VectorXd::Zero(n);
  const BruteLp r = brute_force_lp(c, a, rhs, l, h);
  if (!r.feasible) return std::nullopt;
  return r.value;
}

}  // namespace qres::testing
