#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qres {

/// Box of constant inputs: lower[i] <= u[i] <= upper[i].
struct InputBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index size() const { return lower.size(); }
  bool contains(const Eigen::VectorXd& u, double tol = 0.0) const;
};

/// Generalized k-th order integrator x^(k) = B_bar * u_bar with box inputs.
///
/// Constructed through make() or load_system(); every instance satisfies
/// u_min < u_max componentwise, finite entries and n, m+p, k >= 1.
class IntegratorSystem {
 public:
  static IntegratorSystem make(std::string name, int order, Eigen::MatrixXd b_bar,
                               Eigen::VectorXd u_min, Eigen::VectorXd u_max,
                               std::vector<std::string> labels = {});

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  const Eigen::MatrixXd& b_bar() const { return b_bar_; }
  const Eigen::VectorXd& u_min() const { return box_.lower; }
  const Eigen::VectorXd& u_max() const { return box_.upper; }
  const InputBox& box() const { return box_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Eigen::Index state_dim() const { return b_bar_.rows(); }
  Eigen::Index input_dim() const { return b_bar_.cols(); }

  // Same system with a different integrator order.
  IntegratorSystem with_order(int order) const;

 private:
  IntegratorSystem() = default;

  std::string name_;
  int order_ = 1;
  Eigen::MatrixXd b_bar_;
  InputBox box_;
  std::vector<std::string> labels_;
};

/// Partition of a system's columns into controlled (B, U_c) and lost (C, W_c).
///
/// B keeps the remaining columns in their original order; C holds the lost
/// columns in the order given to split().
class ActuatorSplit {
 public:
  const IntegratorSystem& base() const { return base_; }
  const std::vector<int>& lost_columns() const { return lost_; }
  const std::vector<int>& kept_columns() const { return kept_; }

  const Eigen::MatrixXd& b() const { return b_; }
  const Eigen::MatrixXd& c() const { return c_; }
  const InputBox& u_box() const { return u_box_; }
  const InputBox& w_box() const { return w_box_; }

  Eigen::Index lost_count() const { return c_.cols(); }

  // Reassembles [B C] into the column order of B_bar.
  Eigen::MatrixXd reassemble() const;
  // Scatters (u, w) back into a full input vector u_bar.
  Eigen::VectorXd merge_inputs(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const;

 private:
  friend ActuatorSplit split(const IntegratorSystem&, const std::vector<int>&);
  explicit ActuatorSplit(IntegratorSystem base) : base_(std::move(base)) {}

  IntegratorSystem base_;
  std::vector<int> lost_;
  std::vector<int> kept_;
  Eigen::MatrixXd b_;
  Eigen::MatrixXd c_;
  InputBox u_box_;
  InputBox w_box_;
};

/// Target distance d = x_goal - x0.
class Direction {
 public:
  explicit Direction(Eigen::VectorXd d);
  static Direction between(const Eigen::VectorXd& x_goal, const Eigen::VectorXd& x0);

  const Eigen::VectorXd& vector() const { return d_; }
  Eigen::Index size() const { return d_.size(); }
  bool is_zero() const { return d_.isZero(0.0); }
  Direction scaled(double alpha) const { return Direction(alpha * d_); }
  Direction operator-() const { return Direction(-d_); }

 private:
  Eigen::VectorXd d_;
};

/// Splits off the lost columns (0-based indices). Throws ArgumentError on
/// out-of-range or duplicate indices, or when every column would be lost.
ActuatorSplit split(const IntegratorSystem& sys, const std::vector<int>& lost);

IntegratorSystem parse_system(const std::string& text);
std::string serialize_system(const IntegratorSystem& sys);

IntegratorSystem load_system(const std::filesystem::path& path);
void save_system(const IntegratorSystem& sys, const std::filesystem::path& path);

}  // namespace qres
