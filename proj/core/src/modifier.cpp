#include "spinspec/modifier.hpp"

#include <algorithm>
#include <limits>
#include <memory>

#include "spinspec/error.hpp"
#include "spinspec/spline.hpp"

namespace spinspec {

ModifierPair ModifierPair::zero() {
  return {RadialFunction::constant(0.0), RadialFunction::constant(0.0), {}};
}

namespace {

RadialFunction spline_function(const WarpedSurface& s, std::span<const double> values,
                               const char* label) {
  std::vector<double> knots(values.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    knots[i] = s.r_min() + s.length() * static_cast<double>(i) / static_cast<double>(knots.size() - 1);
  }
  CubicSpline::End left;
  if (s.is_cap()) left.slope = 0.0;
  auto spline = std::make_shared<const CubicSpline>(
      std::move(knots), std::vector<double>(values.begin(), values.end()), left);
  return {[spline](double r) {
            const auto p = (*spline)(r);
            return RadialSample{p.value, p.d1, p.d2};
          },
          std::string("spline:") + label};
}

}  // namespace

ModifierPair ModifierPair::from_parameters(const WarpedSurface& surface,
                                           std::span<const double> params) {
  if (params.size() != 2 * knots) throw config_error("modifier needs 16 spline parameters");
  ModifierPair mp;
  mp.a = spline_function(surface, params.subspan(0, knots), "a");
  mp.u = spline_function(surface, params.subspan(knots, knots), "u");
  mp.parameters.assign(params.begin(), params.end());
  return mp;
}

ModifierPair probe_modifier(const WarpedSurface& surface, double a0) {
  if (!(a0 > 0.0)) throw config_error("probe modifier needs a positive constant a");
  // slope s at each end with -H + 2 a0 du(e0) <= 0, du(e0) = sign * s
  double s0 = 0.0, s1 = 0.0;
  for (BoundarySide side : surface.boundaries()) {
    const BoundaryData b = surface.boundary_data(side);
    if (b.mean_curvature >= 0.0) continue;
    const double slope = b.mean_curvature / (2.0 * a0) * b.normal_sign;
    (side == BoundarySide::inner ? s0 : s1) = slope;
  }
  const double r0 = surface.r_min();
  const double len = surface.length();
  const RadialFunction bump = RadialFunction::cosine_bump(0.1, r0, surface.r_max());
  const RadialFunction u(
      [=](double r) {
        const double t = r - r0;
        const RadialSample c = bump(r);
        const double slope = s0 + (s1 - s0) * t / len;
        return RadialSample{c.value + s0 * t + 0.5 * (s1 - s0) * t * t / len, c.d1 + slope,
                            c.d2 + (s1 - s0) / len};
      },
      "probe");
  return {RadialFunction::constant(a0), u, {}};
}

double modified_scalar(const WarpedSurface& surface, const ModifierPair& mp, double r, int n) {
  const RadialSample a = mp.a(r);
  const RadialSample u = mp.u(r);
  const double lap = surface.laplacian(r, u);
  return surface.scalar_curvature(r) - 4.0 * a.value * lap + 4.0 * a.d1 * u.d1 -
         4.0 * (1.0 - 1.0 / n) * a.value * a.value * u.d1 * u.d1;
}

double conformal_modified_scalar(const WarpedSurface& surface, const ModifierPair& mp, double r,
                                 int n) {
  const RadialSample a = mp.a(r);
  const RadialSample u = mp.u(r);
  const double lap = surface.laplacian(r, u);
  const double du2 = u.d1 * u.d1;
  const double coef =
      (n - 1.0) * (n - 2.0) + 4.0 * (2.0 - n) * a.value + 4.0 * (1.0 - 1.0 / n) * a.value * a.value;
  return surface.scalar_curvature(r) + 4.0 * ((n - 1.0) / 2.0 - a.value) * lap +
         4.0 * a.d1 * u.d1 - coef * du2;
}

std::vector<double> modified_scalar(const WarpedSurface& surface, const ModifierPair& mp,
                                    std::span<const double> nodes, int n) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double r : nodes) out.push_back(modified_scalar(surface, mp, r, n));
  return out;
}

std::vector<double> conformal_modified_scalar(const WarpedSurface& surface, const ModifierPair& mp,
                                              std::span<const double> nodes, int n) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double r : nodes) out.push_back(conformal_modified_scalar(surface, mp, r, n));
  return out;
}

double feasibility_margin(const WarpedSurface& surface, const ModifierPair& mp,
                          FeasibilityVariant variant, int n) {
  double margin = std::numeric_limits<double>::infinity();
  for (BoundarySide side : surface.boundaries()) {
    const BoundaryData b = surface.boundary_data(side);
    const double du_e0 = b.normal_sign * mp.u(b.r).d1;
    const double a = mp.a(b.r).value;
    const double coef = variant == FeasibilityVariant::interior ? 2.0 * a : 2.0 * a - n + 1.0;
    margin = std::min(margin, b.mean_curvature - coef * du_e0);
  }
  return margin;
}

}  // namespace spinspec
