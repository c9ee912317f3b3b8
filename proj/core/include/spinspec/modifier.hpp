#pragma once

// Modifier functions (a, u) and the scalar curvatures they induce:
//   R_{a,u}  = R - 4 a Delta u + 4 <da, du> - 4 (1 - 1/n) a^2 |du|^2
//   Rhat_{a,u} = R + 4 ((n-1)/2 - a) Delta u + 4 <da, du>
//                - ((n-1)(n-2) + 4 (2-n) a + 4 (1 - 1/n) a^2) |du|^2
// with the positive Laplacian.

#include <span>
#include <vector>

#include "spinspec/geometry.hpp"

namespace spinspec {

struct ModifierPair {
  RadialFunction a;
  RadialFunction u;
  std::vector<double> parameters;  // spline controls (a then u) when built from them

  static ModifierPair zero();
  // 8 uniform knots each; parameters.size() must be 16. On a cap both
  // splines are clamped to zero slope at the pole so a and u are smooth
  // there; other ends are natural.
  static constexpr int knots = 8;
  static ModifierPair from_parameters(const WarpedSurface& surface, std::span<const double> params);
};

double modified_scalar(const WarpedSurface& surface, const ModifierPair& mp, double r, int n = 2);
double conformal_modified_scalar(const WarpedSurface& surface, const ModifierPair& mp, double r,
                                 int n = 2);
std::vector<double> modified_scalar(const WarpedSurface& surface, const ModifierPair& mp,
                                    std::span<const double> nodes, int n = 2);
std::vector<double> conformal_modified_scalar(const WarpedSurface& surface, const ModifierPair& mp,
                                              std::span<const double> nodes, int n = 2);

// A nontrivial pair that is feasible for the interior variant: a constant,
// u a cosine bump of amplitude 0.1 plus a quadratic whose end slopes make
// H - 2a du(e0) vanish at every boundary circle with H < 0 (zero slope
// elsewhere). a0 must be positive.
ModifierPair probe_modifier(const WarpedSurface& surface, double a0 = 0.25);

enum class FeasibilityVariant { interior, conformal };

// min over boundary circles of H - 2a du(e0) (interior) or
// H - (2a - n + 1) du(e0) (conformal), du(e0) = outward sign * u'(r_b).
// +infinity when there is no boundary.
double feasibility_margin(const WarpedSurface& surface, const ModifierPair& mp,
                          FeasibilityVariant variant, int n = 2);

}  // namespace spinspec
