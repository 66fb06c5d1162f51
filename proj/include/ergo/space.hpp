#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace ergo {

/// Rectangular search space [0, L_1] x ... x [0, L_d].
struct SearchSpace {
  Eigen::VectorXd lengths;

  explicit SearchSpace(Eigen::VectorXd side_lengths) : lengths(std::move(side_lengths)) {
    const auto d = lengths.size();
    if (d != 2 && d != 3) {
      throw std::invalid_argument("SearchSpace: only 2-D and 3-D spaces are supported");
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
        throw std::invalid_argument("SearchSpace: side lengths must be positive and finite");
      }
    }
  }

  int dims() const { return static_cast<int>(lengths.size()); }
  double volume() const { return lengths.prod(); }
  double min_length() const { return lengths.minCoeff(); }

  /// Component-wise clamp into the box.
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out = x;
    for (Eigen::Index i = 0; i < lengths.size(); ++i) {
      out[i] = std::min(std::max(out[i], 0.0), lengths[i]);
    }
    return out;
  }

  bool contains(const Eigen::VectorXd& x) const {
    for (Eigen::Index i = 0; i < lengths.size(); ++i) {
      if (x[i] < 0.0 || x[i] > lengths[i]) return false;
    }
    return true;
  }
};

}  // namespace ergo
