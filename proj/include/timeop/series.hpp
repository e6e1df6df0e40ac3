#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace timeop {

// Kahan-compensated accumulator.  Series of 10^6..10^7 slowly decaying
// terms appear in the class checks and tail estimates; plain summation
// would lose several digits there.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Upper bound on sum_{k>K} k^{-p} for p > 1.
// Midpoint integral bound: x^{-p} is convex and decreasing, so
//   g(k) <= int_{k-1/2}^{k+1/2} g(x) dx,
// hence the tail is majorized by int_{K+1/2}^inf x^{-p} dx.
inline double power_tail_bound(double p, double K) {
  if (p <= 1.0) return std::numeric_limits<double>::infinity();
  if (K < 0.0) throw std::invalid_argument("power_tail_bound: K must be >= 0");
  return std::pow(K + 0.5, 1.0 - p) / (p - 1.0);
}

// sum_{k=1}^{k_max} k^{-p} plus the tail bound above; majorizes zeta(p).
inline double zeta_upper_bound(double p, long k_max = 10000) {
  if (p <= 1.0) return std::numeric_limits<double>::infinity();
  KahanSum s;
  for (long k = 1; k <= k_max; ++k) s.add(std::pow(static_cast<double>(k), -p));
  return s.value() + power_tail_bound(p, static_cast<double>(k_max));
}

}  // namespace timeop
