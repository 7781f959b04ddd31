#pragma once

#include <algorithm>
#include <cmath>

namespace varcs {

// Closed interval [lower, upper] for a target parameter.
struct Interval {
  double lower = 0.0;
  double upper = 1.0;

  friend bool operator==(const Interval&, const Interval&) = default;

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }

  Interval clamped(double lo, double hi) const {
    Interval r;
    r.lower = std::min(std::max(lower, lo), hi);
    r.upper = std::max(std::min(upper, hi), lo);
    if (r.lower > r.upper) r.lower = r.upper;
    return r;
  }
};

// [sqrt(L), sqrt(U)]: interval for sigma from an interval for sigma^2.
inline Interval std_interval(Interval var_interval) {
  return {std::sqrt(std::max(var_interval.lower, 0.0)),
          std::sqrt(std::max(var_interval.upper, 0.0))};
}

}  // namespace varcs
