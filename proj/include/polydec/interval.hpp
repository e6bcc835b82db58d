#pragma once

#include <algorithm>
#include <string>

#include "polydec/errors.hpp"

namespace polydec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo_ <= hi_)) throw PreconditionViolated("interval with lo > hi");
  }

  double length() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double s) const noexcept { return lo <= s && s <= hi; }
  bool contains(const Interval& other) const noexcept {
    return lo <= other.lo && other.hi <= hi;
  }
  bool empty() const noexcept { return !(lo < hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline double overlap_length(const Interval& a, const Interval& b) noexcept {
  return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

inline std::string to_string(const Interval& I) {
  return "[" + std::to_string(I.lo) + ", " + std::to_string(I.hi) + "]";
}

}  // namespace polydec
