#pragma once

#include <limits>
#include <string>

namespace wmcs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-open interval (lower, upper]. Either end may be infinite. This is the
// shape of every region in the library: A = (-inf, c] and A' = (c, inf)
// partition the line with no shared point.
struct Interval {
  double lower = -kInf;
  double upper = kInf;

  bool contains(double x) const { return x > lower && x <= upper; }
  bool is_whole_line() const { return lower == -kInf && upper == kInf; }

  static Interval whole_line() { return {}; }
  static Interval at_most(double c) { return {-kInf, c}; }
  static Interval above(double c) { return {c, kInf}; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& iv);

}  // namespace wmcs
