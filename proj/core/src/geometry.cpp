#include "spinspec/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "spinspec/error.hpp"
#include "spinspec/spline.hpp"

namespace spinspec {

const char* to_string(SpinStructure s) {
  return s == SpinStructure::antiperiodic ? "antiperiodic" : "periodic";
}

const char* to_string(BoundarySide s) { return s == BoundarySide::inner ? "inner" : "outer"; }

WarpedSurface::WarpedSurface(std::string name, Profile profile, double r_min, double r_max,
                             bool cap, SpinStructure spin)
    : name_(std::move(name)),
      profile_(std::move(profile)),
      r_min_(r_min),
      r_max_(r_max),
      cap_(cap),
      spin_(spin) {
  if (!(r_max_ > r_min_)) throw config_error(name_ + ": empty parameter interval");
  if (cap_ && spin_ == SpinStructure::periodic) {
    throw config_error(name_ + ": a surface with a smooth pole carries the antiperiodic spin structure");
  }
  if (cap_) {
    const RadialSample p = profile_(r_min_);
    if (std::abs(p.value) > 1e-10 || std::abs(p.d1 - 1.0) > 1e-10) {
      throw config_error(name_ + ": cap requires f(r_min) = 0 and f'(r_min) = 1");
    }
  }
  constexpr int probes = 512;
  for (int i = 0; i <= probes; ++i) {
    const double r = r_min_ + (r_max_ - r_min_) * (i + 0.5) / (probes + 1.0);
    if (!(profile_(r).value > 0.0)) throw config_error(name_ + ": profile must be positive inside");
  }
  if (!cap_ && !(profile_(r_min_).value > 0.0)) {
    throw config_error(name_ + ": inner boundary circle has zero radius; mark it as a cap");
  }
  if (!(profile_(r_max_).value > 0.0)) throw config_error(name_ + ": outer boundary has zero radius");
}

void WarpedSurface::check_domain(double r) const {
  const double slack = 1e-12 * std::max(1.0, length());
  if (!(r >= r_min_ - slack && r <= r_max_ + slack)) {
    std::ostringstream os;
    os << name_ << ": r = " << r << " outside [" << r_min_ << ", " << r_max_ << "]";
    throw domain_error(os.str());
  }
}

RadialSample WarpedSurface::profile(double r) const {
  check_domain(r);
  return profile_(r);
}

double WarpedSurface::scalar_curvature(double r) const {
  check_domain(r);
  const double rho = r - r_min_;
  const double tiny = 1e-6 * length();
  if (cap_ && rho < tiny) {
    // -2 f''/f is even in the distance to the pole; Richardson from two
    // offsets removes the quadratic term.
    const double d = 1e-3 * length();
    auto g = [&](double x) {
      const RadialSample p = profile_(r_min_ + x);
      return -2.0 * p.d2 / p.value;
    };
    const double g1 = g(d);
    const double g2 = g(0.5 * d);
    const double g0 = (4.0 * g2 - g1) / 3.0;
    const double c = (g1 - g0) / (d * d);
    return g0 + c * rho * rho;
  }
  const RadialSample p = profile_(r);
  return -2.0 * p.d2 / p.value;
}

std::vector<BoundarySide> WarpedSurface::boundaries() const {
  if (cap_) return {BoundarySide::outer};
  return {BoundarySide::inner, BoundarySide::outer};
}

BoundaryData WarpedSurface::boundary_data(BoundarySide side) const {
  if (side == BoundarySide::inner && cap_) {
    throw domain_error(name_ + ": r_min is a smooth pole, not a boundary");
  }
  const double sign = side == BoundarySide::outer ? 1.0 : -1.0;
  const double r = side == BoundarySide::outer ? r_max_ : r_min_;
  const RadialSample p = profile_(r);
  BoundaryData b;
  b.side = side;
  b.r = r;
  b.radius = p.value;
  b.mean_curvature = sign * p.d1 / p.value;
  b.normal_sign = sign;
  b.normal = Covector{sign, 0.0};
  return b;
}

double WarpedSurface::boundary_length(BoundarySide side) const {
  return 2.0 * std::numbers::pi * boundary_data(side).radius;
}

double WarpedSurface::laplacian(double r, const RadialSample& w) const {
  const RadialSample p = profile(r);
  return -w.d2 - p.d1 / p.value * w.d1;
}

double WarpedSurface::inverse_profile_integral(double r0, double r1) const {
  using Quadrature = boost::math::quadrature::gauss<double, 15>;
  return Quadrature::integrate([this](double r) { return 1.0 / profile_(r).value; }, r0, r1);
}

std::function<double(double)> radial_laplacian(const WarpedSurface& surface,
                                               const RadialFunction& w) {
  return [&surface, w](double r) { return surface.laplacian(r, w(r)); };
}

// ---------------------------------------------------------------------------
// catalog

SurfacePtr WarpedSurface::hemisphere() {
  // Written in the distance to the equator so that f'(pi/2) is exactly 0.
  constexpr double equator = std::numbers::pi / 2.0;
  return std::make_shared<const WarpedSurface>(
      "hemisphere",
      [](double r) {
        const double t = equator - r;
        return RadialSample{std::cos(t), std::sin(t), -std::cos(t)};
      },
      0.0, equator, true, SpinStructure::antiperiodic);
}

SurfacePtr WarpedSurface::spherical_cap(double r1) {
  if (!(r1 > 0.0 && r1 < std::numbers::pi)) throw config_error("cap radius must lie in (0, pi)");
  std::ostringstream name;
  name.precision(17);
  name << "cap:" << r1;
  return std::make_shared<const WarpedSurface>(
      name.str(), [](double r) { return RadialSample{std::sin(r), std::cos(r), -std::sin(r)}; },
      0.0, r1, true, SpinStructure::antiperiodic);
}

SurfacePtr WarpedSurface::disk(double radius) {
  if (!(radius > 0.0)) throw config_error("disk radius must be positive");
  return std::make_shared<const WarpedSurface>(
      radius == 1.0 ? std::string("disk") : "disk:" + std::to_string(radius),
      [](double r) { return RadialSample{r, 1.0, 0.0}; }, 0.0, radius, true,
      SpinStructure::antiperiodic);
}

SurfacePtr WarpedSurface::annulus(double r0, double r1, SpinStructure spin) {
  if (!(r0 > 0.0 && r1 > r0)) throw config_error("annulus needs 0 < r0 < r1");
  std::ostringstream name;
  name.precision(17);
  name << "annulus:" << r0 << "," << r1;
  return std::make_shared<const WarpedSurface>(
      name.str(), [](double r) { return RadialSample{r, 1.0, 0.0}; }, r0, r1, false, spin);
}

SurfacePtr WarpedSurface::cylinder(double length, SpinStructure spin) {
  if (!(length > 0.0)) throw config_error("cylinder length must be positive");
  std::ostringstream name;
  name.precision(17);
  name << "cylinder:" << length;
  return std::make_shared<const WarpedSurface>(
      name.str(), [](double) { return RadialSample{1.0, 0.0, 0.0}; }, 0.0, length, false, spin);
}

SurfacePtr WarpedSurface::from_samples(std::string name, std::vector<double> r,
                                       std::vector<double> f, SpinStructure spin) {
  if (r.size() < 4 || r.size() != f.size()) {
    throw config_error(name + ": profile needs at least 4 (r, f) samples");
  }
  const bool cap = f.front() == 0.0;
  CubicSpline::End left;
  if (cap) left.slope = 1.0;
  const double r0 = r.front();
  const double r1 = r.back();
  auto spline = std::make_shared<const CubicSpline>(std::move(r), std::move(f), left);
  return std::make_shared<const WarpedSurface>(
      std::move(name),
      [spline](double x) {
        const auto s = (*spline)(x);
        return RadialSample{s.value, s.d1, s.d2};
      },
      r0, r1, cap, cap ? SpinStructure::antiperiodic : spin);
}

namespace {

std::vector<double> numbers_after(const std::string& spec, std::size_t colon) {
  std::vector<double> out;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("bad number in geometry '" + spec + "'");
    }
  }
  return out;
}

SurfacePtr read_profile_csv(const std::string& path, SpinStructure spin) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open profile CSV '" + path + "'");
  std::vector<double> r, f;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw config_error("profile CSV rows need two columns (r,f): " + path);
    }
    try {
      const double rv = std::stod(a);
      const double fv = std::stod(b);
      r.push_back(rv);
      f.push_back(fv);
    } catch (const std::exception&) {
      if (!first) throw config_error("non-numeric row in profile CSV: " + line);
    }
    first = false;
  }
  return WarpedSurface::from_samples("csv:" + path, std::move(r), std::move(f), spin);
}

}  // namespace

SurfacePtr make_surface(const std::string& spec, std::optional<SpinStructure> spin) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const bool has_args = colon != std::string::npos;

  if (kind == "hemisphere" && !has_args) {
    if (spin == SpinStructure::periodic) throw config_error("hemisphere is antiperiodic");
    return WarpedSurface::hemisphere();
  }
  if (kind == "disk" && !has_args) {
    if (spin == SpinStructure::periodic) throw config_error("disk is antiperiodic");
    return WarpedSurface::disk();
  }
  if (kind == "cap" && has_args) {
    const auto v = numbers_after(spec, colon);
    if (v.size() != 1) throw config_error("cap:<r1> takes one number");
    if (spin == SpinStructure::periodic) throw config_error("cap is antiperiodic");
    return WarpedSurface::spherical_cap(v[0]);
  }
  if (kind == "annulus" && has_args) {
    const auto v = numbers_after(spec, colon);
    if (v.size() != 2) throw config_error("annulus:<r0>,<r1> takes two numbers");
    return WarpedSurface::annulus(v[0], v[1], spin.value_or(SpinStructure::antiperiodic));
  }
  if (kind == "cylinder" && has_args) {
    const auto v = numbers_after(spec, colon);
    if (v.size() != 1) throw config_error("cylinder:<L> takes one number");
    return WarpedSurface::cylinder(v[0], spin.value_or(SpinStructure::periodic));
  }
  if (kind == "csv" && has_args) {
    return read_profile_csv(spec.substr(colon + 1), spin.value_or(SpinStructure::antiperiodic));
  }
  throw config_error("unknown geometry '" + spec + "'");
}

std::vector<std::string> catalog_entries() {
  return {"hemisphere            f = sin r on [0, pi/2], pole at r = 0, H = 0",
          "cap:<r1>              f = sin r on [0, r1], 0 < r1 < pi",
          "disk                  f = r on [0, 1], flat unit disk",
          "annulus:<r0>,<r1>     f = r on [r0, r1], two boundary circles",
          "cylinder:<L>          f = 1 on [0, L], periodic spin structure by default",
          "csv:<path>            user profile, columns r,f (cap if f(r_0) = 0)"};
}

}  // namespace spinspec
