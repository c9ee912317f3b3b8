#pragma once

// Radial conformal change gbar = e^{2u} g of a warped surface. The target is
// again warped, dsbar^2 + ftilde(s)^2 dtheta^2, with s(r) = int_{r_min}^r e^u
// and ftilde(s(r)) = e^{u(r)} f(r). The target owns its own profile closure;
// its curvatures are computed from that profile, not from the transformation
// laws, so the laws can be checked against it.

#include <memory>
#include <span>
#include <vector>

#include "spinspec/geometry.hpp"

namespace spinspec {

class ConformalRescaling {
 public:
  ConformalRescaling(SurfacePtr source, RadialFunction u);

  const WarpedSurface& source() const { return *source_; }
  SurfacePtr source_ptr() const { return source_; }
  SurfacePtr target() const { return target_; }
  const RadialFunction& u() const { return u_; }

  double target_coordinate(double r) const;  // s(r)
  double source_coordinate(double s) const;  // r(s)

  // A radial function of r re-expressed on the target as a function of s,
  // with s-derivatives.
  RadialFunction pull(const RadialFunction& w) const;
  RadialFunction u_on_target() const { return pull(u_); }

  // Max pointwise residuals of the n = 2 transformation laws over the given
  // source nodes:
  //   curvature       |Rbar e^{2u} - (R + 2 Delta u)|
  //   laplacian       |Deltabar u - e^{-2u} Delta u|
  //   mean_curvature  |Hbar - e^{-u} (H + du(e0))|  over boundary circles
  // `laplacian_displayed` reports |Deltabar u - e^{-2u}(Delta u + |du|^2)|,
  // which is not a valid identity for n = 2 and is kept for comparison.
  struct LawResiduals {
    double curvature = 0.0;
    double laplacian = 0.0;
    double mean_curvature = 0.0;
    double laplacian_displayed = 0.0;
  };
  LawResiduals law_residuals(std::span<const double> source_nodes) const;

 private:
  struct Map;

  SurfacePtr source_;
  RadialFunction u_;
  std::shared_ptr<const Map> map_;
  SurfacePtr target_;
};

}  // namespace spinspec
