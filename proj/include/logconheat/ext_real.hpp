#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace logconheat {

// Extended real: a finite double or the bottom element (-infinity).
// Bottom is a tagged state, never a sentinel double, so arithmetic on it
// cannot be produced or destroyed by rounding.
//
// Rules used by the concavity checks:
//   bottom + x = bottom
//   c * bottom = bottom for c > 0, and 0 * bottom = 0 (the term drops out
//   of a convex combination)
//   bottom <= bottom, bottom < any finite value
class ExtReal {
 public:
  ExtReal() : v_(0.0), bottom_(false) {}

  explicit ExtReal(double v) : v_(v), bottom_(false) {
    if (!std::isfinite(v)) throw std::invalid_argument("ExtReal: finite value required");
  }

  static ExtReal bottom() {
    ExtReal r;
    r.bottom_ = true;
    return r;
  }

  bool is_bottom() const { return bottom_; }

  double finite() const {
    if (bottom_) throw std::logic_error("ExtReal: finite() on bottom");
    return v_;
  }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.bottom_ || b.bottom_) return a.bottom_ && b.bottom_;
    return a.v_ == b.v_;
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.bottom_) return !b.bottom_;
    if (b.bottom_) return false;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return b <= a; }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }

 private:
  double v_;
  bool bottom_;
};

// (1-mu)*a + mu*b with the scaling rules above.  mu in [0,1].
inline ExtReal convex_combine(const ExtReal& a, const ExtReal& b, double mu) {
  if (mu < 0.0 || mu > 1.0) throw std::domain_error("convex_combine: mu outside [0,1]");
  const bool a_counts = (mu < 1.0);
  const bool b_counts = (mu > 0.0);
  if ((a_counts && a.is_bottom()) || (b_counts && b.is_bottom())) return ExtReal::bottom();
  double acc = 0.0;
  if (a_counts) acc += (1.0 - mu) * a.finite();
  if (b_counts) acc += mu * b.finite();
  return ExtReal(acc);
}

}  // namespace logconheat
