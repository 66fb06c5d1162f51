#pragma once

#include <memory>

#include <Eigen/Dense>

#include "ergo/basis.hpp"
#include "ergo/dynamics.hpp"
#include "ergo/kernels.hpp"
#include "ergo/volumetric.hpp"

namespace ergo {

/// Per-state coverage terms the controller consumes: basis values f(s) and
/// their state gradients. The two implementations below feed identical
/// inputs to the same kernels, so the standard controller and a volumetric
/// controller with a Point model produce bitwise-equal results.
class CoverageEvaluator {
 public:
  virtual ~CoverageEvaluator() = default;
  virtual int n_modes() const = 0;
  virtual Eigen::VectorXd values(const Eigen::VectorXd& s) const = 0;
  virtual Eigen::MatrixXd gradients(const Eigen::VectorXd& s) const = 0;
  /// Values and gradients from one footprint evaluation (the planner's hot
  /// path); must agree bitwise with the individual calls.
  virtual std::pair<Eigen::VectorXd, Eigen::MatrixXd> values_and_gradients(
      const Eigen::VectorXd& s) const {
    return {values(s), gradients(s)};
  }
};

/// Standard ergodic control: the robot is its planar position point.
class StandardEvaluator : public CoverageEvaluator {
 public:
  StandardEvaluator(const BasisSet& basis, const DynamicsModel& dyn) : basis_(basis), dyn_(dyn) {}

  int n_modes() const override { return basis_.n_modes(); }

  Eigen::VectorXd values(const Eigen::VectorXd& s) const override {
    Eigen::MatrixXd pt(1, 2);
    pt << s[dyn_.ix], s[dyn_.iy];
    const auto tables = kernels::build_tables(basis_, pt, false);
    return kernels::mode_values(basis_, tables, 1.0);
  }

  Eigen::MatrixXd gradients(const Eigen::VectorXd& s) const override {
    Eigen::MatrixXd pt(1, 2);
    pt << s[dyn_.ix], s[dyn_.iy];
    const auto tables = kernels::build_tables(basis_, pt, true);
    return kernels::mode_gradients(basis_, tables, point_jac(), dyn_.state_dim, 1.0);
  }

  std::pair<Eigen::VectorXd, Eigen::MatrixXd> values_and_gradients(
      const Eigen::VectorXd& s) const override {
    Eigen::MatrixXd pt(1, 2);
    pt << s[dyn_.ix], s[dyn_.iy];
    const auto tables = kernels::build_tables(basis_, pt, true);
    return {kernels::mode_values(basis_, tables, 1.0),
            kernels::mode_gradients(basis_, tables, point_jac(), dyn_.state_dim, 1.0)};
  }

 private:
  kernels::PackedJacobians point_jac() const {
    kernels::PackedJacobians jac;
    jac.dep_dims = {dyn_.ix, dyn_.iy};
    jac.blocks = Eigen::Matrix2d::Identity();
    return jac;
  }

  const BasisSet& basis_;
  const DynamicsModel& dyn_;
};

/// Volumetric ergodic control: the robot is its footprint sample cloud.
class VolumetricEvaluator : public CoverageEvaluator {
 public:
  VolumetricEvaluator(const BasisSet& basis, const VolumetricModel& model,
                      const DynamicsModel& dyn)
      : basis_(basis), model_(model), dyn_(dyn) {}

  int n_modes() const override { return basis_.n_modes(); }

  Eigen::VectorXd values(const Eigen::VectorXd& s) const override {
    return vol_basis_all(basis_, model_, dyn_, s);
  }

  Eigen::MatrixXd gradients(const Eigen::VectorXd& s) const override {
    return vol_basis_grad_all(basis_, model_, dyn_, s);
  }

  std::pair<Eigen::VectorXd, Eigen::MatrixXd> values_and_gradients(
      const Eigen::VectorXd& s) const override {
    const Eigen::MatrixXd pts = sample_points(model_, dyn_, basis_.space, s);
    const auto tables = kernels::build_tables(basis_, pts, true);
    const auto jac = sample_jacobians(model_, dyn_, basis_.space, s);
    const double scale = 1.0 / model_.n_samples;
    return {kernels::mode_values(basis_, tables, scale),
            kernels::mode_gradients(basis_, tables, jac, dyn_.state_dim, scale)};
  }

 private:
  const BasisSet& basis_;
  const VolumetricModel& model_;
  const DynamicsModel& dyn_;
};

}  // namespace ergo
