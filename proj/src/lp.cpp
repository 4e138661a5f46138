#include "qres/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qres/errors.hpp"

namespace qres::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// How an original variable x_j maps onto nonnegative standard-form columns.
struct VarMap {
  enum class Kind { Fixed, FromLower, FromUpper, Free } kind = Kind::Fixed;
  double offset = 0.0;  // x = offset + scale * (y_pos - y_neg)
  double scale = 1.0;
  int pos = -1;         // standard column of y (FromLower/FromUpper/Free)
  int neg = -1;         // second column for Free
  int slack = -1;       // slack column of the upper-bound row (FromLower with finite upper)
};

// Dense simplex tableau for: minimize cost . y  s.t.  A y = b, y >= 0, b >= 0.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, std::vector<int> initial_basis,
          const LpOptions& opt)
      : rows_(a.rows()), cols_(a.cols()), opt_(opt), basis_(std::move(initial_basis)) {
    t_ = Eigen::MatrixXd::Zero(rows_ + 1, cols_ + 1);
    t_.topLeftCorner(rows_, cols_) = a;
    t_.topRightCorner(rows_, 1) = b;
    allowed_.assign(static_cast<size_t>(cols_), true);
  }

  Eigen::Index rows() const { return rows_; }
  const std::vector<int>& basis() const { return basis_; }
  double rhs(Eigen::Index i) const { return t_(i, cols_); }
  double entry(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }
  void forbid(int col) { allowed_[static_cast<size_t>(col)] = false; }

  // Installs a cost vector and prices out the current basis.
  void set_cost(const Eigen::VectorXd& cost) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cols_) = cost.transpose();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[static_cast<size_t>(i)]];
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
  }

  // Current objective value (minimization).
  double objective() const { return -t_(rows_, cols_); }

  enum class Result { Optimal, Unbounded };

  Result optimize() {
    for (;;) {
      const int enter = entering_column();
      if (enter < 0) return Result::Optimal;
      const Eigen::Index leave = leaving_row(enter);
      if (leave < 0) return Result::Unbounded;
      pivot(leave, enter);
      if (++pivots_ > opt_.max_pivots) throw Error("lp: pivot limit exceeded");
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    t_(r, c) = 1.0;
    for (Eigen::Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) {
        t_.row(i) -= f * t_.row(r);
        t_(i, c) = 0.0;
      }
    }
    basis_[static_cast<size_t>(r)] = static_cast<int>(c);
  }

  void drop_row(Eigen::Index r) {
    const Eigen::Index last = t_.rows() - 1;
    Eigen::MatrixXd kept(t_.rows() - 1, t_.cols());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i <= last; ++i)
      if (i != r) kept.row(k++) = t_.row(i);
    t_ = std::move(kept);
    basis_.erase(basis_.begin() + r);
    --rows_;
  }

 private:
  // Bland: lowest-index column with a negative reduced cost.
  int entering_column() const {
    double scale = 1.0;
    for (Eigen::Index j = 0; j < cols_; ++j) scale = std::max(scale, std::abs(t_(rows_, j)));
    const double tol = 1e-11 * scale;
    for (Eigen::Index j = 0; j < cols_; ++j)
      if (allowed_[static_cast<size_t>(j)] && t_(rows_, j) < -tol) return static_cast<int>(j);
    return -1;
  }

  // Minimum ratio; ties go to the lowest basic variable index (Bland).
  Eigen::Index leaving_row(int col) const {
    Eigen::Index best = -1;
    double best_ratio = kInf;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const double a = t_(i, col);
      if (a <= opt_.pivot_tol) continue;
      const double ratio = std::max(0.0, t_(i, cols_)) / a;
      const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
      if (best < 0 || ratio < best_ratio - tie) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tie &&
                 basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(best)]) {
        best = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    return best;
  }

  Eigen::Index rows_;
  Eigen::Index cols_;
  LpOptions opt_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  int pivots_ = 0;
};

}  // namespace

void LpProblem::validate() const {
  const Eigen::Index v = objective.size();
  if (eq_matrix.cols() != v) throw ArgumentError("lp: eq_matrix column count != objective size");
  if (eq_rhs.size() != eq_matrix.rows()) throw ArgumentError("lp: eq_rhs size != row count");
  if (lower.size() != v || upper.size() != v) throw ArgumentError("lp: bound sizes != objective size");
  if (!objective.allFinite() || !eq_matrix.allFinite() || !eq_rhs.allFinite())
    throw ArgumentError("lp: objective and constraints must be finite");
  for (Eigen::Index j = 0; j < v; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j])) throw ArgumentError("lp: NaN bound");
    if (lower[j] == kInf || upper[j] == -kInf) throw ArgumentError("lp: bound on the wrong side");
    if (lower[j] > upper[j]) throw ArgumentError("lp: lower bound exceeds upper bound");
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

LpOutcome solve(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  const Eigen::Index v = problem.objective.size();
  const Eigen::Index q = problem.eq_matrix.rows();

  // Map every variable onto nonnegative columns; bounded ranges become [0, 1].
  std::vector<VarMap> maps(static_cast<size_t>(v));
  int ncols = 0;
  int n_upper_rows = 0;
  for (Eigen::Index j = 0; j < v; ++j) {
    VarMap& mp = maps[static_cast<size_t>(j)];
    const double lo = problem.lower[j], hi = problem.upper[j];
    const bool lo_f = std::isfinite(lo), hi_f = std::isfinite(hi);
    if (lo_f && hi_f && lo == hi) {
      mp.kind = VarMap::Kind::Fixed;
      mp.offset = lo;
    } else if (lo_f) {
      mp.kind = VarMap::Kind::FromLower;
      mp.offset = lo;
      mp.scale = hi_f ? hi - lo : 1.0;
      mp.pos = ncols++;
      if (hi_f) ++n_upper_rows;
    } else if (hi_f) {
      mp.kind = VarMap::Kind::FromUpper;
      mp.offset = hi;
      mp.scale = -1.0;
      mp.pos = ncols++;
    } else {
      mp.kind = VarMap::Kind::Free;
      mp.pos = ncols++;
      mp.neg = ncols++;
    }
  }
  // Slack columns for the upper-bound rows follow the structural columns.
  for (Eigen::Index j = 0; j < v; ++j) {
    VarMap& mp = maps[static_cast<size_t>(j)];
    if (mp.kind == VarMap::Kind::FromLower && std::isfinite(problem.upper[j]))
      mp.slack = ncols++;
  }

  // Equality rows in standard form, equilibrated by their largest coefficient.
  Eigen::MatrixXd a_eq = Eigen::MatrixXd::Zero(q, ncols);
  Eigen::VectorXd b_eq = problem.eq_rhs;
  for (Eigen::Index j = 0; j < v; ++j) {
    const VarMap& mp = maps[static_cast<size_t>(j)];
    const auto col = problem.eq_matrix.col(j);
    b_eq -= mp.offset * col;
    if (mp.pos >= 0) a_eq.col(mp.pos) += mp.scale * col;
    if (mp.neg >= 0) a_eq.col(mp.neg) -= mp.scale * col;
  }

  const double rhs_scale = 1.0 + (problem.eq_rhs.size() ? problem.eq_rhs.cwiseAbs().maxCoeff() : 0.0);
  std::vector<Eigen::Index> live_rows;
  for (Eigen::Index i = 0; i < q; ++i) {
    const double row_max = a_eq.row(i).cwiseAbs().maxCoeff();
    if (row_max == 0.0) {
      if (std::abs(b_eq[i]) > options.feas_tol * rhs_scale) return LpOutcome{LpStatus::Infeasible, 0.0, {}};
      continue;
    }
    a_eq.row(i) /= row_max;
    b_eq[i] /= row_max;
    live_rows.push_back(i);
  }

  const auto n_eq = static_cast<Eigen::Index>(live_rows.size());
  const Eigen::Index n_rows = n_eq + n_upper_rows;
  // Columns: structural + slacks (ncols), then one artificial per equality row.
  const Eigen::Index n_total = ncols + n_eq;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_rows, n_total);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_rows);
  std::vector<int> basis(static_cast<size_t>(n_rows));
  for (Eigen::Index r = 0; r < n_eq; ++r) {
    a.row(r).head(ncols) = a_eq.row(live_rows[static_cast<size_t>(r)]);
    b[r] = b_eq[live_rows[static_cast<size_t>(r)]];
    if (b[r] < 0) {
      a.row(r) *= -1.0;
      b[r] = -b[r];
    }
    a(r, ncols + r) = 1.0;
    basis[static_cast<size_t>(r)] = static_cast<int>(ncols + r);
  }
  {
    Eigen::Index r = n_eq;
    for (const auto& mp : maps) {
      if (mp.slack < 0) continue;
      a(r, mp.pos) = 1.0;
      a(r, mp.slack) = 1.0;
      b[r] = 1.0;
      basis[static_cast<size_t>(r)] = mp.slack;
      ++r;
    }
  }

  Tableau tab(a, b, basis, options);

  // Phase I: minimize the sum of artificials.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_total);
  phase1.tail(n_eq).setOnes();
  tab.set_cost(phase1);
  tab.optimize();
  const double b_scale = 1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  if (tab.objective() > options.feas_tol * b_scale) return LpOutcome{LpStatus::Infeasible, 0.0, {}};

  // Drive remaining artificials out of the basis; rows that cannot pivot are redundant.
  for (Eigen::Index r = tab.rows() - 1; r >= 0; --r) {
    if (tab.basis()[static_cast<size_t>(r)] < ncols) continue;
    Eigen::Index best = -1;
    double best_abs = options.pivot_tol;
    for (Eigen::Index j = 0; j < ncols; ++j) {
      const double e = std::abs(tab.entry(r, j));
      if (e > best_abs) {
        best_abs = e;
        best = j;
      }
    }
    if (best >= 0)
      tab.pivot(r, best);
    else
      tab.drop_row(r);
  }
  for (Eigen::Index j = ncols; j < n_total; ++j) tab.forbid(static_cast<int>(j));

  // Phase II: minimize -objective over the standard columns.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_total);
  for (Eigen::Index j = 0; j < v; ++j) {
    const VarMap& mp = maps[static_cast<size_t>(j)];
    const double c = problem.objective[j];
    if (mp.pos >= 0) cost[mp.pos] -= c * mp.scale;
    if (mp.neg >= 0) cost[mp.neg] += c * mp.scale;
  }
  tab.set_cost(cost);
  if (tab.optimize() == Tableau::Result::Unbounded) return LpOutcome{LpStatus::Unbounded, 0.0, {}};

  // Basic solution, refined by a direct solve against the unpivoted rows.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_total);
  const auto& final_basis = tab.basis();
  for (size_t r = 0; r < final_basis.size(); ++r) y[final_basis[r]] = tab.rhs(static_cast<Eigen::Index>(r));
  {
    const auto nb = static_cast<Eigen::Index>(final_basis.size());
    Eigen::MatrixXd ab(n_rows, nb);
    for (Eigen::Index k = 0; k < nb; ++k) ab.col(k) = a.col(final_basis[static_cast<size_t>(k)]);
    Eigen::VectorXd rhs = b;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ab);
    if (lu.rank() == nb) {
      Eigen::VectorXd yb = lu.solve(rhs);
      Eigen::VectorXd candidate = y;
      for (Eigen::Index k = 0; k < nb; ++k) candidate[final_basis[static_cast<size_t>(k)]] = yb[k];
      const double old_res = (a * y - b).cwiseAbs().maxCoeff();
      const double new_res = (a * candidate - b).cwiseAbs().maxCoeff();
      if (new_res <= old_res && candidate.minCoeff() >= -options.feas_tol) y = candidate;
    }
  }
  for (Eigen::Index j = 0; j < n_total; ++j) y[j] = std::max(0.0, y[j]);

  LpOutcome out;
  out.status = LpStatus::Optimal;
  out.argument.resize(v);
  for (Eigen::Index j = 0; j < v; ++j) {
    const VarMap& mp = maps[static_cast<size_t>(j)];
    double val = mp.offset;
    if (mp.pos >= 0) val += mp.scale * y[mp.pos];
    if (mp.neg >= 0) val -= mp.scale * y[mp.neg];
    out.argument[j] = std::clamp(val, problem.lower[j], problem.upper[j]);
  }
  out.value = problem.objective.dot(out.argument);
  return out;
}

namespace {

// Largest |(M x + offset)_i| over the box, bounded row by row.
double attainable_speed(const Eigen::MatrixXd& m, const InputBox& box, const Eigen::VectorXd& offset) {
  double reach = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double row = offset.size() ? std::abs(offset[i]) : 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row += std::abs(m(i, j)) * std::max(std::abs(box.lower[j]), std::abs(box.upper[j]));
    reach = std::max(reach, row);
  }
  return reach;
}

}  // namespace

double speed_threshold(const Eigen::MatrixXd& m, const InputBox& box, const Eigen::VectorXd& d) {
  const double dn = d.cwiseAbs().maxCoeff();
  if (dn == 0.0) throw ArgumentError("speed_threshold: direction must be nonzero");
  return 1e-9 * attainable_speed(m, box, {}) / dn;
}

DirectionalSpeed max_scaled_direction(const Eigen::MatrixXd& m, const InputBox& box,
                                      const Eigen::VectorXd& d, const Eigen::VectorXd& offset) {
  if (d.size() != m.rows()) throw ArgumentError("max_scaled_direction: direction size != rows of M");
  if (box.size() != m.cols()) throw ArgumentError("max_scaled_direction: box size != columns of M");
  if (d.isZero(0.0)) throw ArgumentError("max_scaled_direction: direction must be nonzero");
  const bool has_offset = offset.size() != 0;
  if (has_offset && offset.size() != m.rows())
    throw ArgumentError("max_scaled_direction: offset size != rows of M");

  const Eigen::Index v = m.cols();
  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(v + 1);
  p.objective[v] = 1.0;
  p.eq_matrix.resize(m.rows(), v + 1);
  p.eq_matrix << m, -d;
  p.eq_rhs = has_offset ? Eigen::VectorXd(-offset) : Eigen::VectorXd::Zero(m.rows());
  p.lower.resize(v + 1);
  p.upper.resize(v + 1);
  p.lower << box.lower, 0.0;
  p.upper << box.upper, kInf;

  DirectionalSpeed out;
  out.threshold = 1e-9 * attainable_speed(m, box, offset) / d.cwiseAbs().maxCoeff();

  const LpOutcome r = solve(p);
  switch (r.status) {
    case LpStatus::Infeasible:
      out.kind = DirectionalSpeed::Kind::NegativeCertificate;
      out.lambda = ExtendedReal(0.0);
      break;
    case LpStatus::Unbounded:
      out.kind = DirectionalSpeed::Kind::Unbounded;
      out.lambda = ExtendedReal::infinity();
      break;
    case LpStatus::Optimal:
      out.kind = DirectionalSpeed::Kind::Finite;
      out.lambda = ExtendedReal(std::max(0.0, r.argument[v]));
      out.argument = r.argument.head(v);
      break;
  }
  return out;
}

ExtendedReal max_signed_multiple(const Eigen::MatrixXd& m, const InputBox& box,
                                 const Eigen::VectorXd& target) {
  if (target.size() != m.rows()) throw ArgumentError("max_signed_multiple: target size != rows of M");
  const Eigen::Index v = m.cols();
  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(v + 1);
  p.objective[v] = 1.0;
  p.eq_matrix.resize(m.rows(), v + 1);
  p.eq_matrix << m, -target;
  p.eq_rhs = Eigen::VectorXd::Zero(m.rows());
  p.lower.resize(v + 1);
  p.upper.resize(v + 1);
  p.lower << box.lower, -kInf;
  p.upper << box.upper, kInf;
  const LpOutcome r = solve(p);
  switch (r.status) {
    case LpStatus::Infeasible: return ExtendedReal::negative_infinity();
    case LpStatus::Unbounded: return ExtendedReal::infinity();
    case LpStatus::Optimal: return ExtendedReal(r.argument[v]);
  }
  return ExtendedReal::negative_infinity();
}

}  // namespace qres::lp
