#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spinspec/bounds.hpp"
#include "spinspec/error.hpp"
#include "spinspec/identities.hpp"
#include "spinspec/spectrum.hpp"

using namespace spinspec;
using std::numbers::pi;

namespace {

struct Fundamental {
  SpinorField phi;
  double lambda;
};

Fundamental fundamental(SurfacePtr s, BoundaryCondition bc, int n, double k_max = 2.5) {
  const Spectrum sp = aggregate(std::move(s), bc, k_max, n);
  return {SpinorField::from_eigenvector(*sp.fundamental_operator, sp.fundamental.vector),
          sp.lambda_min()};
}

SpinorField killing(int n, bool exact_derivative = true) {
  auto v = [](double r) {
    const oracle::Vec w = oracle::hemisphere_killing(r);
    return Spinor(w(0), w(1));
  };
  auto dv = [](double r) {
    const oracle::Vec w = oracle::hemisphere_killing_derivative(r);
    return Spinor(w(0), w(1));
  };
  if (exact_derivative) return SpinorField::sample(WarpedSurface::hemisphere(), FourierMode(1), n, v, dv);
  return SpinorField::sample(WarpedSurface::hemisphere(), FourierMode(1), n, v);
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

ModifierPair smooth_modifier(const WarpedSurface& s) {
  return {RadialFunction::polynomial({0.2, -0.3, 0.1}),
          RadialFunction::cosine_bump(0.15, s.r_min(), s.r_max()), {}};
}

const Mat2& e(int i) { return make_frame().generator(i); }

}  // namespace

TEST_CASE("zero spinor: both sides of the integral formula vanish") {
  const SpinorField zero = SpinorField::sample(WarpedSurface::disk(), FourierMode(1), 64,
                                               [](double) { return Spinor::Zero().eval(); });
  const IdentityReport r = sl_residual(zero);
  CHECK(r.left == 0.0);
  CHECK(r.right == 0.0);
  CHECK(r.residual == 0.0);
  CHECK_THROWS_WITH_AS(energy_momentum(zero), doctest::Contains("vanishing spinor"), Error);
}

TEST_CASE("Killing spinor: integral formula balances and the boundary term vanishes") {
  const SpinorField phi = killing(256);
  CHECK(std::abs(boundary_dirac_term(phi, BoundarySide::outer)) <= 1e-6);
  const IdentityReport r = sl_residual(phi, 1.0);
  CHECK(std::abs(r.left) <= 1e-6);
  CHECK(r.residual <= 1e-5);
  const IdentityReport coarse = sl_residual(killing(128), 1.0);
  CHECK(order(coarse.residual, r.residual) >= 1.8);
}

TEST_CASE("integral formula converges at second order on computed eigenspinors") {
  for (auto [s, bc] : {std::pair{WarpedSurface::disk(), BoundaryCondition::local_plus},
                       std::pair{WarpedSurface::hemisphere(), BoundaryCondition::aps_minus},
                       std::pair{WarpedSurface::annulus(0.5, 1.0), BoundaryCondition::local_minus}}) {
    const auto a = fundamental(s, bc, 128);
    const auto b = fundamental(s, bc, 256);
    const double ra = sl_residual(a.phi, a.lambda).residual;
    const double rb = sl_residual(b.phi, b.lambda).residual;
    CHECK(rb <= 1e-3);
    CHECK(order(ra, rb) >= 1.8);
    // with the discrete D phi instead of lambda phi
    CHECK(sl_residual(b.phi).residual <= 1e-3);
  }
}

TEST_CASE("boundary connection of the second fundamental form") {
  const auto a = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 128);
  const auto b = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 256);
  const double ra = rtc2_residual(a.phi).residual;
  const double rb = rtc2_residual(b.phi).residual;
  CHECK(rb <= 1e-3);
  CHECK(order(ra, rb) >= 1.8);
  CHECK(rtc2_residual(killing(128)).residual <= 1e-5);
}

TEST_CASE("energy-momentum tensor of the Killing spinor") {
  const SpinorField phi = killing(64);
  const EnergyMomentum em = energy_momentum(phi);
  CHECK(em.excluded_count == 0);
  for (int j = 0; j < phi.size(); ++j) {
    CHECK((em.q[j] - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
    const double r = phi.nodes()[j];
    const double integrand = 0.25 * phi.surface().scalar_curvature(r) + em.q[j].squaredNorm();
    CHECK(integrand == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(em.q[j].squaredNorm() == doctest::Approx(0.5).epsilon(1e-8));
  }
  // lambda^2 (1 - 1/n) = R/4 on the limiting case
  CHECK(0.5 * 1.0 == doctest::Approx(0.25 * 2.0));
}

TEST_CASE("parallel spinor on the flat cylinder has Q = 0") {
  const SpinorField phi = SpinorField::sample(WarpedSurface::cylinder(2.0), FourierMode(0), 64,
                                              [](double) { return Spinor(Complex(0.6, 0.0), Complex(0.0, 0.8)); },
                                              [](double) { return Spinor::Zero().eval(); });
  const EnergyMomentum em = energy_momentum(phi);
  for (const auto& q : em.q) CHECK(q.cwiseAbs().maxCoeff() == 0.0);
  CHECK(killing_residual(phi, 0.0, ModifierPair::zero()) == 0.0);
}

TEST_CASE("Q is symmetric and traces to lambda on eigenspinors") {
  const auto a = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 128);
  const auto b = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 256);
  const EnergyMomentum qa = energy_momentum(a.phi);
  const EnergyMomentum qb = energy_momentum(b.phi);
  for (const auto& q : qb.q) CHECK(q(0, 1) == q(1, 0));
  CHECK(qb.epsilon == doctest::Approx(1e-8 * std::pow(b.phi.max_norm(), 2)));
  const double ra = trace_q_residual(a.phi, qa, a.lambda).residual;
  const double rb = trace_q_residual(b.phi, qb, b.lambda).residual;
  CHECK(rb <= 1e-2);
  CHECK(order(ra, rb) >= 1.8);
  // the refined Friedrich bound holds on computed data
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& q : qb.q) inf = std::min(inf, q.squaredNorm());
  CHECK(inf <= b.lambda * b.lambda + default_tol_report);
  CHECK(inf >= 0.0);
}

TEST_CASE("modified connection norms: direct versus expanded") {
  const SpinorField k = killing(64);
  const ModifierPair a0{RadialFunction::constant(0.0), RadialFunction::polynomial({0.0, 0.4, -0.2}), {}};
  const IdentityReport g = modified_gradient_norm(k, a0, 1.0, GradientVariant::gcm);
  CHECK(g.residual <= 1e-10);
  CHECK(std::abs(g.left) <= 1e-10);

  const auto s = WarpedSurface::spherical_cap(1.2);
  const ModifierPair mp = smooth_modifier(*s);
  for (GradientVariant v : {GradientVariant::gcm, GradientVariant::emtm}) {
    const auto fa = fundamental(s, BoundaryCondition::local_plus, 128);
    const auto fb = fundamental(s, BoundaryCondition::local_plus, 256);
    const double ra = modified_gradient_norm(fa.phi, mp, fa.lambda, v).residual;
    const double rb = modified_gradient_norm(fb.phi, mp, fb.lambda, v).residual;
    CHECK(rb <= 1e-3);
    CHECK(order(ra, rb) >= 1.8);
  }
}

TEST_CASE("eq1 with a = u = 0 is the integral formula") {
  const auto f = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 256);
  const IdentityReport e1 = eq_residual(f.phi, f.lambda, ModifierPair::zero(), EqVariant::eq1);
  const IdentityReport sl = sl_residual(f.phi, f.lambda);
  CHECK(e1.name == "eq1");
  CHECK(std::abs(e1.residual - sl.residual) <= 1e-5);
}

TEST_CASE("eq1 on the hemisphere Killing spinor: both sides vanish") {
  const SpinorField phi = killing(256);
  const IdentityReport e1 = eq_residual(phi, 1.0, ModifierPair::zero(), EqVariant::eq1);
  CHECK(std::abs(e1.left) <= 1e-10);
  CHECK(std::abs(e1.right) <= 1e-5);
}

TEST_CASE("eq1 and eq2 with a feasible nontrivial modifier") {
  for (auto s : {WarpedSurface::disk(), WarpedSurface::annulus(0.5, 1.0), WarpedSurface::spherical_cap(pi / 3)}) {
    const ModifierPair mp = probe_modifier(*s);
    CHECK(feasibility_margin(*s, mp, FeasibilityVariant::interior) >= -1e-12);
    for (EqVariant which : {EqVariant::eq1, EqVariant::eq2}) {
      const auto fa = fundamental(s, BoundaryCondition::local_plus, 128);
      const auto fb = fundamental(s, BoundaryCondition::local_plus, 256);
      const double ra = eq_residual(fa.phi, fa.lambda, mp, which).residual;
      const double rb = eq_residual(fb.phi, fb.lambda, mp, which).residual;
      CHECK(rb <= 1e-2);
      CHECK(order(ra, rb) >= 1.8);
    }
  }
}

TEST_CASE("eq3 and eq4 need a rescaling of the spinor's surface") {
  const auto f = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 64);
  CHECK_THROWS_AS(eq_residual(f.phi, f.lambda, ModifierPair::zero(), EqVariant::eq3), Error);
  ConformalRescaling other(WarpedSurface::disk(2.0), RadialFunction::constant(0.1));
  CHECK_THROWS_AS(eq_residual(f.phi, f.lambda, ModifierPair::zero(), EqVariant::eq4, &other), Error);
}

TEST_CASE("conformal identities on the disk") {
  ConformalRescaling cr(WarpedSurface::disk(), RadialFunction::polynomial({0.3, 0.0, -0.3}));
  const ModifierPair mp{RadialFunction::constant(0.25), cr.u(), {}};
  const auto fa = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 128);
  const auto fb = fundamental(WarpedSurface::disk(), BoundaryCondition::local_plus, 256);
  const double e3 = eq_residual(fb.phi, fb.lambda, mp, EqVariant::eq3, &cr).residual;
  CHECK(e3 <= 1e-5);
  const double e4a = eq_residual(fa.phi, fa.lambda, mp, EqVariant::eq4, &cr).residual;
  const double e4b = eq_residual(fb.phi, fb.lambda, mp, EqVariant::eq4, &cr).residual;
  CHECK(e4b <= 1e-4);
  CHECK(order(e4a, e4b) >= 1.8);
  const double pa = conformal_push(fa.phi, fa.lambda, cr).residual;
  const double pb = conformal_push(fb.phi, fb.lambda, cr).residual;
  CHECK(order(pa, pb) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("push with u = 0 is the identity") {
  const auto f = fundamental(WarpedSurface::spherical_cap(1.0), BoundaryCondition::local_plus, 64);
  ConformalRescaling cr(f.phi.surface_ptr(), RadialFunction::constant(0.0));
  const ConformalPush push = conformal_push(f.phi, f.lambda, cr);
  double own = 0.0;
  std::vector<double> defect(static_cast<std::size_t>(f.phi.size()));
  for (int j = 0; j < f.phi.size(); ++j) {
    CHECK((push.psi.values()[j] - f.phi.values()[j]).norm() <= 1e-12);
    defect[j] = (f.phi.dirac(j) - f.lambda * f.phi.values()[j]).squaredNorm();
  }
  own = std::sqrt(f.phi.integrate([&](int j) { return defect[j]; })) / f.phi.l2_norm();
  CHECK(push.residual == doctest::Approx(own).epsilon(1e-8));
}

TEST_CASE("constant conformal factor scales the spectrum by e^-c") {
  const double c = 0.35;
  const auto src = WarpedSurface::spherical_cap(1.2);
  ConformalRescaling cr(src, RadialFunction::constant(c));
  const Spectrum a = aggregate(src, BoundaryCondition::local_plus, 2.5, 128);
  const Spectrum b = aggregate(cr.target(), BoundaryCondition::local_plus, 2.5, 128);
  CHECK(std::abs(b.lambda_min() - std::exp(-c) * a.lambda_min()) <= 1e-6);
}

TEST_CASE("Killing residual") {
  // closed form, exact derivatives
  CHECK(killing_residual(killing(64), 1.0, ModifierPair::zero()) <= 1e-10);
  // the discrete hemisphere minimizer is Killing up to O(h^2)
  const auto a = fundamental(WarpedSurface::hemisphere(), BoundaryCondition::local_plus, 128);
  const auto b = fundamental(WarpedSurface::hemisphere(), BoundaryCondition::local_plus, 256);
  const double ra = killing_residual(a.phi, a.lambda, ModifierPair::zero());
  const double rb = killing_residual(b.phi, b.lambda, ModifierPair::zero());
  CHECK(rb <= 5e-3);
  CHECK(order(ra, rb) == doctest::Approx(2.0).epsilon(0.1));
  // a smaller cap is not a limiting case
  for (int n : {128, 256}) {
    const auto f = fundamental(WarpedSurface::spherical_cap(pi / 3), BoundaryCondition::local_plus, n);
    CHECK(killing_residual(f.phi, f.lambda, ModifierPair::zero()) >= 0.1);
  }
}

TEST_CASE("discrete Lichnerowicz formula at interior nodes") {
  for (auto [s, bc] : {std::pair{WarpedSurface::disk(), BoundaryCondition::local_plus},
                       std::pair{WarpedSurface::annulus(0.5, 1.0), BoundaryCondition::local_plus}}) {
    const auto a = fundamental(s, bc, 128);
    const auto b = fundamental(s, bc, 256);
    const double ra = lichnerowicz_residual(a.phi);
    const double rb = lichnerowicz_residual(b.phi);
    CHECK(order(ra, rb) >= 1.8);
  }
  const double ka = lichnerowicz_residual(killing(128, false));
  const double kb = lichnerowicz_residual(killing(256, false));
  CHECK(order(ka, kb) >= 1.8);
}

TEST_CASE("spinor field plumbing") {
  const SpinorField phi = killing(64);
  CHECK_THROWS_AS(phi.value_at(3.0), Error);
  const double r = 0.731;
  CHECK((phi.value_at(r) - Spinor(oracle::hemisphere_killing(r)(0), oracle::hemisphere_killing(r)(1))).norm() <= 1e-7);
  const Spinor t = phi.trace(BoundarySide::outer);
  CHECK((t - Spinor(oracle::hemisphere_killing(pi / 2)(0), oracle::hemisphere_killing(pi / 2)(1))).norm() <= 1e-5);
  // covariant derivative in e1 equals the radial derivative for this frame
  CHECK((phi.covariant(0, 3) - phi.radial_derivative()[3]).norm() == 0.0);
  // Clifford contraction reproduces D
  const Spinor d = e(0) * phi.covariant(0, 5) + e(1) * phi.covariant(1, 5);
  CHECK((d - phi.dirac(5)).norm() <= 1e-14);
}
