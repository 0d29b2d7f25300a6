#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "glspace/error.hpp"

namespace glspace {

// Nonnegative real or +infinity, with c/inf = 0 and 0*inf = 0.
class Extended {
 public:
  constexpr Extended() = default;
  Extended(double v) : v_(v) {  // NOLINT: implicit on purpose
    if (std::isnan(v) || v < 0.0) throw InvariantError("Extended: negative or NaN value");
  }

  static Extended infinity() { return Extended(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return !is_finite(); }
  double value() const { return v_; }

  friend Extended operator*(Extended a, Extended b) {
    if (a.v_ == 0.0 || b.v_ == 0.0) return Extended(0.0);
    return Extended(a.v_ * b.v_);
  }
  friend Extended operator+(Extended a, Extended b) { return Extended(a.v_ + b.v_); }
  friend bool operator==(Extended a, Extended b) { return a.v_ == b.v_; }
  friend auto operator<=>(Extended a, Extended b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

// c / x with the convention c / inf = 0.
inline double divide(double c, Extended x) {
  if (x.is_infinite()) return 0.0;
  if (x.value() == 0.0) throw DomainError("division by zero extended value");
  return c / x.value();
}

inline std::ostream& operator<<(std::ostream& os, Extended x) {
  if (x.is_infinite()) return os << "inf";
  return os << x.value();
}

}  // namespace glspace
