#pragma once

// Rotationally symmetric surfaces with boundary, metric dr^2 + f(r)^2 dtheta^2
// on r in [r_min, r_max]. The orthonormal frame is e1 = d/dr, e2 = f^-1 d/dtheta.
//
// Sign conventions:
//   * Laplacian is the positive one, Delta w = -(1/f) (f w')'.
//   * Mean curvature uses the outward normal, H = s f'(r_b) / f(r_b) with
//     s = +1 at r_max and s = -1 at r_min. The round disk of radius r has
//     H = 1/r on its boundary circle.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spinspec/clifford.hpp"
#include "spinspec/radial_function.hpp"

namespace spinspec {

enum class SpinStructure { antiperiodic, periodic };
enum class BoundarySide { inner, outer };

const char* to_string(SpinStructure s);
const char* to_string(BoundarySide s);

struct BoundaryData {
  BoundarySide side;
  double r;               // parameter value of the boundary circle
  double radius;          // f(r_b)
  double mean_curvature;  // H
  double normal_sign;     // +1 outer, -1 inner; outward normal covector = normal_sign * e^1
  Covector normal;
};

class WarpedSurface {
 public:
  using Profile = std::function<RadialSample(double)>;

  // Throws spinspec::Error(config) if the profile violates the invariants:
  // f > 0 inside, and for a cap f(r_min) = 0, f'(r_min) = 1 to 1e-10.
  WarpedSurface(std::string name, Profile profile, double r_min, double r_max, bool cap,
                SpinStructure spin);

  static std::shared_ptr<const WarpedSurface> hemisphere();
  static std::shared_ptr<const WarpedSurface> spherical_cap(double r1);
  static std::shared_ptr<const WarpedSurface> disk(double radius = 1.0);
  static std::shared_ptr<const WarpedSurface> annulus(double r0, double r1,
                                                      SpinStructure spin = SpinStructure::antiperiodic);
  static std::shared_ptr<const WarpedSurface> cylinder(double length,
                                                       SpinStructure spin = SpinStructure::periodic);
  // Natural cubic spline through (r, f) samples; a cap is detected from
  // f(r_0) == 0 and then clamped to f'(r_0) = 1.
  static std::shared_ptr<const WarpedSurface> from_samples(std::string name, std::vector<double> r,
                                                           std::vector<double> f,
                                                           SpinStructure spin);

  const std::string& name() const { return name_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  double length() const { return r_max_ - r_min_; }
  bool is_cap() const { return cap_; }
  SpinStructure spin_structure() const { return spin_; }

  // f, f', f''. Throws on r outside [r_min, r_max].
  RadialSample profile(double r) const;
  double scalar_curvature(double r) const;

  std::vector<BoundarySide> boundaries() const;
  BoundaryData boundary_data(BoundarySide side) const;
  double boundary_length(BoundarySide side) const;

  // Positive Laplacian of a radial function given its derivatives at r.
  double laplacian(double r, const RadialSample& w) const;

  // Integral of 1/f over [r0, r1], both inside the open domain near a pole.
  double inverse_profile_integral(double r0, double r1) const;

 private:
  void check_domain(double r) const;

  std::string name_;
  Profile profile_;
  double r_min_;
  double r_max_;
  bool cap_;
  SpinStructure spin_;
};

using SurfacePtr = std::shared_ptr<const WarpedSurface>;

// Geometry catalog: hemisphere, cap:<r1>, disk, annulus:<r0>,<r1>,
// cylinder:<L>, csv:<path>. Throws spinspec::Error(config) on unknown names.
// An explicit spin structure overrides the catalog default (caps reject
// periodic).
SurfacePtr make_surface(const std::string& spec,
                        std::optional<SpinStructure> spin = std::nullopt);
std::vector<std::string> catalog_entries();

// Delta w as a function of r.
std::function<double(double)> radial_laplacian(const WarpedSurface& surface,
                                               const RadialFunction& w);

}  // namespace spinspec
