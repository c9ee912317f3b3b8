#include "spinspec/conformal.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "spinspec/error.hpp"

namespace spinspec {

// Cumulative table of s(r) on a uniform panel grid; inversion by Newton with
// a bisection fallback inside the bracketing panel.
struct ConformalRescaling::Map {
  static constexpr int panels = 4096;
  using Quadrature = boost::math::quadrature::gauss<double, 10>;

  SurfacePtr source;
  RadialFunction u;
  double r0 = 0.0;
  double dr = 0.0;
  std::vector<double> cumulative;

  Map(SurfacePtr src, RadialFunction fn) : source(std::move(src)), u(std::move(fn)) {
    r0 = source->r_min();
    dr = source->length() / panels;
    cumulative.resize(panels + 1, 0.0);
    for (int i = 0; i < panels; ++i) {
      cumulative[i + 1] = cumulative[i] + piece(r0 + i * dr, r0 + (i + 1) * dr);
    }
  }

  double piece(double a, double b) const {
    return Quadrature::integrate([this](double r) { return std::exp(u.value(r)); }, a, b);
  }

  double s_of_r(double r) const {
    const double t = std::clamp((r - r0) / dr, 0.0, static_cast<double>(panels));
    const int i = std::min(static_cast<int>(t), panels - 1);
    const double left = r0 + i * dr;
    return cumulative[i] + piece(left, r);
  }

  double r_of_s(double s) const {
    const double total = cumulative.back();
    if (s <= 0.0) return r0 - s * std::exp(-u.value(r0));  // tiny overshoots only
    if (s >= total) return source->r_max() + (s - total) * std::exp(-u.value(source->r_max()));
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    const int i = std::clamp(static_cast<int>(std::distance(cumulative.begin(), it)) - 1, 0,
                             panels - 1);
    const double start = r0 + i * dr;
    double lo = start;
    double hi = start + dr;
    double r = start + dr * (s - cumulative[i]) / (cumulative[i + 1] - cumulative[i]);
    for (int iter = 0; iter < 100; ++iter) {
      const double g = cumulative[i] + piece(start, r) - s;
      if (g > 0.0) hi = r; else lo = r;
      double next = r - g / std::exp(u.value(r));
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) <= 4e-16 * std::max(1.0, std::abs(r)) || hi - lo <= 1e-15) {
        return next;
      }
      r = next;
    }
    throw numerical_error("conformal coordinate inversion did not converge");
  }
};

ConformalRescaling::ConformalRescaling(SurfacePtr source, RadialFunction u)
    : source_(std::move(source)), u_(std::move(u)) {
  map_ = std::make_shared<const Map>(source_, u_);
  auto map = map_;
  const double s_max = map_->cumulative.back();
  target_ = std::make_shared<const WarpedSurface>(
      "conformal(" + source_->name() + ", " + u_.description() + ")",
      [map](double s) {
        const double r = std::clamp(map->r_of_s(s), map->source->r_min(), map->source->r_max());
        const RadialSample f = map->source->profile(r);
        const RadialSample w = map->u(r);
        const double e = std::exp(w.value);
        return RadialSample{e * f.value, w.d1 * f.value + f.d1,
                            (w.d2 * f.value + w.d1 * f.d1 + f.d2) / e};
      },
      0.0, s_max, source_->is_cap(), source_->spin_structure());
}

double ConformalRescaling::target_coordinate(double r) const { return map_->s_of_r(r); }

double ConformalRescaling::source_coordinate(double s) const { return map_->r_of_s(s); }

RadialFunction ConformalRescaling::pull(const RadialFunction& w) const {
  auto map = map_;
  return {[map, w](double s) {
            const double r =
                std::clamp(map->r_of_s(s), map->source->r_min(), map->source->r_max());
            const RadialSample p = w(r);
            const RadialSample c = map->u(r);
            const double e = std::exp(-c.value);
            return RadialSample{p.value, e * p.d1, e * e * (p.d2 - c.d1 * p.d1)};
          },
          w.description() + " on target"};
}

ConformalRescaling::LawResiduals ConformalRescaling::law_residuals(
    std::span<const double> source_nodes) const {
  LawResiduals out;
  const RadialFunction ut = u_on_target();
  for (double r : source_nodes) {
    const double s = target_coordinate(r);
    const RadialSample w = u_(r);
    const double e2 = std::exp(2.0 * w.value);
    const double lap = source_->laplacian(r, w);
    const double rbar = target_->scalar_curvature(s);
    out.curvature = std::max(out.curvature,
                             std::abs(rbar * e2 - (source_->scalar_curvature(r) + 2.0 * lap)));
    const double lapbar = target_->laplacian(s, ut(s));
    out.laplacian = std::max(out.laplacian, std::abs(lapbar - lap / e2));
    out.laplacian_displayed =
        std::max(out.laplacian_displayed, std::abs(lapbar - (lap + w.d1 * w.d1) / e2));
  }
  for (BoundarySide side : source_->boundaries()) {
    const BoundaryData b = source_->boundary_data(side);
    const BoundaryData bt = target_->boundary_data(side);
    const RadialSample w = u_(b.r);
    const double expected = std::exp(-w.value) * (b.mean_curvature + b.normal_sign * w.d1);
    out.mean_curvature = std::max(out.mean_curvature, std::abs(bt.mean_curvature - expected));
  }
  return out;
}

}  // namespace spinspec
