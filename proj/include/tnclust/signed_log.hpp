#pragma once

#include <cmath>

namespace tnclust {

/// A real scalar held as (sign, ln|value|) so that products over many
/// sites cannot underflow. sign == 0 marks an exact zero; log_abs is
/// meaningless in that case.
struct SignedLog {
  double log_abs = 0.0;
  int sign = 0;

  static SignedLog zero() { return SignedLog{0.0, 0}; }

  static SignedLog from_value(double v) {
    if (v == 0.0) return zero();
    return SignedLog{std::log(std::abs(v)), v > 0.0 ? 1 : -1};
  }

  bool is_zero() const { return sign == 0; }
  double magnitude() const { return is_zero() ? 0.0 : std::exp(log_abs); }
  double value() const { return sign * magnitude(); }

  SignedLog& operator*=(const SignedLog& o) {
    if (is_zero() || o.is_zero()) {
      *this = zero();
    } else {
      log_abs += o.log_abs;
      sign *= o.sign;
    }
    return *this;
  }

  friend SignedLog operator*(SignedLog a, const SignedLog& b) { return a *= b; }
};

}  // namespace tnclust
