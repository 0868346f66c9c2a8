#pragma once

#include <cmath>
#include <ostream>

#include "wg/errors.hpp"

namespace wg {

/// A real number with a certified enclosure lo <= point <= hi.
struct IntervalValue {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  IntervalValue() = default;
  IntervalValue(double p, double l, double h) : point(p), lo(l), hi(h) {
    if (!(lo <= point && point <= hi) || !std::isfinite(hi - lo)) {
      throw consistency_error("IntervalValue: enclosure does not contain its point");
    }
  }

  static IntervalValue exact(double v) { return {v, v, v}; }

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool overlaps(const IntervalValue& o) const { return lo <= o.hi && o.lo <= hi; }

  IntervalValue operator+(const IntervalValue& o) const {
    return {point + o.point, lo + o.lo, hi + o.hi};
  }
};

inline std::ostream& operator<<(std::ostream& os, const IntervalValue& v) {
  return os << v.point << " [" << v.lo << ", " << v.hi << "]";
}

}  // namespace wg
