#pragma once

#include <cmath>

namespace ergo {

/// Neumaier-compensated running sum. Keeps long accumulations (quadrature,
/// per-step coefficient averages) accurate to a few ulp regardless of length.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }

  void reset() {
    sum = 0.0;
    comp = 0.0;
  }
};

}  // namespace ergo
