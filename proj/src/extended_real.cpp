#include "qres/extended_real.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "qres/errors.hpp"

namespace qres {

ExtendedReal::ExtendedReal(double v) : v_(v) {
  if (std::isnan(v)) throw ArgumentError("ExtendedReal cannot hold NaN");
}

std::string ExtendedReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v_);
  return std::string(buf, res.ptr);
}

std::string ExtendedReal::to_display(int precision) const {
  if (is_pos_inf()) return "∞";
  if (is_neg_inf()) return "-∞";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v_);
  return buf;
}

ExtendedReal ExtendedReal::parse(const std::string& text) {
  if (text == "inf" || text == "+inf") return infinity();
  if (text == "-inf") return negative_infinity();
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || std::isnan(v))
    throw ParseError("not an extended real: '" + text + "'");
  return ExtendedReal(v);
}

}  // namespace qres
