#include "qres/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qres/errors.hpp"
#include "qres/reach.hpp"
#include "qres/resilience.hpp"

namespace qres::oracle {

namespace {

void check_scales(const std::vector<double>& scales) {
  for (double a : scales)
    if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("homogeneity_probe: scales must be positive");
}

double relative_gap(ExtendedReal scaled, ExtendedReal base, double alpha) {
  if (!base.is_finite() || !scaled.is_finite())
    return base.is_finite() == scaled.is_finite() ? 0.0 : std::numeric_limits<double>::infinity();
  const double expect = alpha * base.value();
  if (expect == 0.0) return std::abs(scaled.value());
  return std::abs(scaled.value() - expect) / expect;
}

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (std::uint64_t p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

}  // namespace

double violation(ExtendedReal observed, ExtendedReal theory, double rel_tol) {
  if (theory.is_pos_inf()) return 0.0;
  if (observed.is_pos_inf()) return std::numeric_limits<double>::infinity();
  const double excess = observed.value() - theory.value();
  if (excess <= rel_tol * std::max(1.0, std::abs(theory.value()))) return 0.0;
  return excess;
}

ScanReport grid_worst_w(const ActuatorSplit& split, const Direction& d, int points_per_axis) {
  if (points_per_axis < 2) throw ArgumentError("grid_worst_w: need at least 2 points per axis");
  if (d.is_zero()) throw ArgumentError("grid_worst_w: direction must be nonzero");
  const auto p = static_cast<int>(split.lost_count());
  double total = std::pow(static_cast<double>(points_per_axis), p);
  if (total > static_cast<double>(kMaxGridPoints))
    throw CapacityError("grid_worst_w: " + std::to_string(points_per_axis) + "^" + std::to_string(p) +
                        " grid points exceed the cap of " + std::to_string(kMaxGridPoints));

  const InputBox& box = split.w_box();
  const auto count = static_cast<std::uint64_t>(total);
  ScanReport rep;
  rep.worst_value = ExtendedReal::negative_infinity();
  Eigen::VectorXd w(p);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (int j = p - 1; j >= 0; --j) {
      const auto i = static_cast<int>(rest % static_cast<std::uint64_t>(points_per_axis));
      rest /= static_cast<std::uint64_t>(points_per_axis);
      // Endpoints are set exactly so that every vertex is on the grid.
      if (i == 0) w[j] = box.lower[j];
      else if (i == points_per_axis - 1) w[j] = box.upper[j];
      else w[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * i / (points_per_axis - 1);
    }
    const ExtendedReal t = reach::malfunction_time_for_w(split, w, d);
    ++rep.evaluations;
    if (t > rep.worst_value) {
      rep.worst_value = t;
      rep.worst_argument = w;
    }
  }
  rep.theory_value = reach::malfunctioning_reach_time(split, d).time;
  rep.max_violation = violation(rep.worst_value, rep.theory_value);
  return rep;
}

std::vector<Eigen::VectorXd> sphere_directions(Eigen::Index n, int samples, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("sphere_directions: dimension must be positive");
  if (samples < 0) throw ArgumentError("sphere_directions: samples must be nonnegative");
  const auto pairs = static_cast<std::size_t>((n + 1) / 2);
  const std::vector<std::uint64_t> bases = first_primes(2 * pairs);

  std::mt19937_64 rng(seed);
  std::vector<double> shift(bases.size());
  for (double& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;

  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; out.size() < static_cast<std::size_t>(samples); ++i) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(2 * pairs));
    for (std::size_t k = 0; k < pairs; ++k) {
      auto uniform = [&](std::size_t b) {
        double u = radical_inverse(static_cast<std::uint64_t>(i) + 1, bases[b]) + shift[b];
        u -= std::floor(u);
        return std::max(u, 0x1.0p-53);
      };
      const double r = std::sqrt(-2.0 * std::log(uniform(2 * k)));
      const double theta = 2.0 * std::numbers::pi * uniform(2 * k + 1);
      g[static_cast<Eigen::Index>(2 * k)] = r * std::cos(theta);
      g[static_cast<Eigen::Index>(2 * k + 1)] = r * std::sin(theta);
    }
    Eigen::VectorXd v = g.head(n);
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    out.push_back(v / norm);
  }
  return out;
}

ScanReport direction_scan(const ActuatorSplit& split, int samples, std::uint64_t seed) {
  if (samples < 0) throw ArgumentError("direction_scan: samples must be nonnegative");
  const auto rep_q = resilience::quantitative_resilience(split);
  if (!rep_q.resilient) throw DomainError("direction_scan: split is not resilient");
  const Eigen::VectorXd c = split.c().col(0);
  if (c.isZero(0.0)) throw DomainError("direction_scan: lost column is zero");

  const Eigen::VectorXd cu = c / c.norm();
  const ExtendedReal t_plus = reach::time_ratio(split, Direction(cu));
  const ExtendedReal t_minus = reach::time_ratio(split, Direction(Eigen::VectorXd(-cu)));

  ScanReport rep;
  rep.theory_value = std::max(t_plus, t_minus);
  rep.worst_value = t_plus;
  rep.worst_argument = cu;
  if (t_minus > t_plus) {
    rep.worst_value = t_minus;
    rep.worst_argument = -cu;
  }
  rep.evaluations = 2;
  for (const Eigen::VectorXd& dir : sphere_directions(c.size(), samples, seed)) {
    const ExtendedReal t = reach::time_ratio(split, Direction(dir));
    ++rep.evaluations;
    if (t > rep.worst_value) {
      rep.worst_value = t;
      rep.worst_argument = dir;
    }
  }
  rep.max_violation = violation(rep.worst_value, rep.theory_value);
  return rep;
}

double homogeneity_probe(const IntegratorSystem& sys, const Direction& d,
                         const std::vector<double>& scales) {
  if (d.is_zero()) throw ArgumentError("homogeneity_probe: direction must be nonzero");
  check_scales(scales);
  const ExtendedReal base = reach::nominal_reach_time(sys, d).time;
  double worst = 0.0;
  for (double a : scales)
    worst = std::max(worst, relative_gap(reach::nominal_reach_time(sys, d.scaled(a)).time, base, a));
  return worst;
}

double homogeneity_probe(const ActuatorSplit& split, const Direction& d,
                         const std::vector<double>& scales) {
  double worst = homogeneity_probe(split.base(), d, scales);
  const ExtendedReal base = reach::malfunctioning_reach_time(split, d).time;
  for (double a : scales)
    worst = std::max(worst,
                     relative_gap(reach::malfunctioning_reach_time(split, d.scaled(a)).time, base, a));
  return worst;
}

}  // namespace qres::oracle
