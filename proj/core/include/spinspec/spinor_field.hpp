#pragma once

// Discrete spinor field e^{ik theta} v(r) sampled at the cell centers of a
// uniform grid. Derivatives are second-order finite differences (one-sided
// three-point stencils at the ends); boundary traces are quadratic
// extrapolations from the three nearest centers.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "spinspec/dirac.hpp"

namespace spinspec {

class SpinorField {
 public:
  // Normalized to int_M |phi|^2 = 1 (the eigenvector's sign is kept).
  static SpinorField from_eigenvector(const ModeOperator& op, const Eigen::VectorXd& vector);
  // Samples a frame-component function v(r) at the centers of an N-cell grid.
  static SpinorField sample(SurfacePtr surface, FourierMode mode, int n_cells,
                            const std::function<Spinor(double)>& v);
  // Same with an exact radial derivative instead of finite differences.
  static SpinorField sample(SurfacePtr surface, FourierMode mode, int n_cells,
                            const std::function<Spinor(double)>& v,
                            const std::function<Spinor(double)>& dv);

  const WarpedSurface& surface() const { return *surface_; }
  SurfacePtr surface_ptr() const { return surface_; }
  FourierMode mode() const { return mode_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double h() const { return h_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<Spinor>& values() const { return values_; }
  const std::vector<Spinor>& radial_derivative() const { return derivative_; }
  const std::vector<RadialSample>& profile() const { return profile_; }

  // nabla_i phi at node j, i = 0 (e1) or 1 (e2).
  Spinor covariant(int i, int j) const;
  // Matrix of nabla_2 on the mode at radius r.
  Mat2 angular_connection(int j) const;
  Spinor dirac(int j) const;

  Spinor trace(BoundarySide side) const;
  // Quadratic extrapolation of per-node values to a boundary circle.
  Spinor extrapolate(const std::vector<Spinor>& values, BoundarySide side) const;

  // int_M g |dvol| with the midpoint rule, g given per node.
  double integrate(const std::function<double(int)>& g) const;
  double l2_norm() const;
  double max_norm() const;

  // Fourth-order Lagrange interpolation in r; throws domain error outside
  // [r_min, r_max].
  Spinor value_at(double r) const;

 private:
  SpinorField(SurfacePtr surface, FourierMode mode, int n_cells);
  void finish();

  SurfacePtr surface_;
  FourierMode mode_{1};
  double h_ = 0.0;
  std::vector<double> nodes_;
  std::vector<RadialSample> profile_;
  std::vector<Spinor> values_;
  std::vector<Spinor> derivative_;
};

// Componentwise second-order derivative of per-node spinor values.
std::vector<Spinor> differentiate(const std::vector<Spinor>& values, double h);

}  // namespace spinspec
