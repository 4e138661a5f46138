#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

namespace qres {

/// Real number that may also be +inf or -inf, never NaN.
///
/// Reach times and time ratios take the value +inf when a target cannot be
/// guaranteed; this type keeps that case explicit at API boundaries.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  explicit ExtendedReal(double v);

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(Raw{}, std::numeric_limits<double>::infinity());
  }
  static constexpr ExtendedReal negative_infinity() {
    return ExtendedReal(Raw{}, -std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

  // Underlying double, including +-infinity.
  double value() const { return v_; }

  auto operator<=>(const ExtendedReal&) const = default;

  // "inf", "-inf" or the shortest round-trip decimal.
  std::string to_string() const;
  // Same as to_string() but with the infinity symbol.
  std::string to_display(int precision = 6) const;

  // Parses "inf", "+inf", "-inf" or a decimal number.
  static ExtendedReal parse(const std::string& text);

 private:
  struct Raw {};
  constexpr ExtendedReal(Raw, double v) : v_(v) {}
  double v_ = 0.0;
};

}  // namespace qres
