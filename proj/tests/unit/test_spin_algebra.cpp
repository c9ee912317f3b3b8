#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "spinspec/clifford.hpp"
#include "spinspec/dirac.hpp"
#include "spinspec/error.hpp"

using namespace spinspec;

namespace {

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

struct Random {
  std::mt19937_64 gen{20261015};
  std::normal_distribution<double> n{0.0, 1.0};
  Covector covector() { return {n(gen), n(gen)}; }
  Covector unit() { return covector().normalized(); }
  Spinor spinor() { return {Complex(n(gen), n(gen)), Complex(n(gen), n(gen))}; }
};

const Mat2 id = Mat2::Identity();

}  // namespace

TEST_CASE("generators satisfy the Clifford relation") {
  const CliffordFrame& fr = make_frame();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const Mat2 anti = fr.generator(a) * fr.generator(b) + fr.generator(b) * fr.generator(a);
      CHECK(max_abs(anti + 2.0 * (a == b ? 1.0 : 0.0) * id) == 0.0);
    }
    CHECK(max_abs(fr.generator(a).adjoint() + fr.generator(a)) == 0.0);
  }
  CHECK(max_abs(fr.volume() * fr.volume() + id) == 0.0);
}

TEST_CASE("Clifford multiplication by a unit covector is an isometry") {
  const Spinor phi(Complex(1.0, 0.0), Complex(0.0, 1.0));
  const Spinor out = clifford_mul(make_frame(), Covector(1.0, 0.0), phi);
  CHECK(out.norm() == doctest::Approx(phi.norm()).epsilon(1e-15));
}

TEST_CASE("clifford_mul is linear and squares to minus the norm") {
  const CliffordFrame& fr = make_frame();
  Random rnd;
  const Spinor s = rnd.spinor();
  CHECK(clifford_mul(fr, Covector::Zero(), s).norm() == 0.0);
  const Covector e1(1.0, 0.0);
  CHECK((clifford_mul(fr, e1, clifford_mul(fr, e1, s)) + s).norm() == 0.0);
  for (int i = 0; i < 100; ++i) {
    const Covector x = rnd.covector();
    const Covector y = rnd.covector();
    const double c = rnd.n(rnd.gen);
    const Spinor lhs = clifford_mul(fr, c * x + y, s);
    const Spinor rhs = c * clifford_mul(fr, x, s) + clifford_mul(fr, y, s);
    CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
    const Spinor xx = clifford_mul(fr, x, clifford_mul(fr, x, s));
    CHECK((xx + x.squaredNorm() * s).norm() <= 1e-13 * x.squaredNorm() * s.norm());
  }
}

TEST_CASE("pairing identity (X.phi, X.psi) = |X|^2 (phi, psi) on random triples") {
  const CliffordFrame& fr = make_frame();
  Random rnd;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Covector x = rnd.covector();
    const Spinor phi = rnd.spinor();
    const Spinor psi = rnd.spinor();
    const Complex lhs = pairing(clifford_mul(fr, x, phi), clifford_mul(fr, x, psi));
    const Complex rhs = x.squaredNorm() * pairing(phi, psi);
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("spinor norm is the Hermitian self-pairing") {
  Random rnd;
  for (int i = 0; i < 10; ++i) {
    const Spinor s = rnd.spinor();
    const Complex p = pairing(s, s);
    CHECK(p.real() >= 0.0);
    CHECK(p.imag() == 0.0);
    CHECK(p.real() == doctest::Approx(s.squaredNorm()).epsilon(1e-15));
  }
}

TEST_CASE("interior chirality axioms") {
  const CliffordFrame& fr = make_frame();
  const Mat2 f = chirality(fr);
  const auto r = chirality_axioms(fr, f);
  CHECK(r.square <= 1e-14);
  CHECK(r.anticommute <= 1e-14);
  CHECK(r.unitary <= 1e-14);
  // F = i omega up to sign
  CHECK(std::min(max_abs(f - Complex(0.0, 1.0) * fr.volume()),
                 max_abs(f + Complex(0.0, 1.0) * fr.volume())) == 0.0);
}

TEST_CASE("boundary chirality axioms for the coordinate normal") {
  const CliffordFrame& fr = make_frame();
  const Covector e1(1.0, 0.0);
  const Mat2 g = boundary_chirality(fr, e1);
  CHECK(max_abs(g * fr.generator(0) + fr.generator(0) * g) == 0.0);
  CHECK(max_abs(g * fr.generator(1) - fr.generator(1) * g) == 0.0);
  const auto r = boundary_chirality_axioms(fr, g, e1);
  CHECK(r.square <= 1e-14);
  CHECK(r.unitary <= 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat2> es(g);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("boundary chirality axioms for random unit normals") {
  const CliffordFrame& fr = make_frame();
  Random rnd;
  for (int i = 0; i < 200; ++i) {
    const Covector nu = rnd.unit();
    const Mat2 g = boundary_chirality(fr, nu);
    const auto r = boundary_chirality_axioms(fr, g, nu);
    CHECK(r.square <= 1e-14);
    CHECK(r.anticommute <= 1e-14);
    CHECK(r.commute <= 1e-14);
    CHECK(r.unitary <= 1e-14);
    CHECK(std::abs(g.trace()) <= 1e-14);
  }
}

TEST_CASE("boundary chirality is parallel for the boundary connection") {
  // Gamma commutes with nabla^dM on every mode of every boundary circle.
  const Mat2 g = boundary_chirality(make_frame(), Covector(1.0, 0.0));
  for (const auto& s : {WarpedSurface::hemisphere(), WarpedSurface::disk(),
                        WarpedSurface::annulus(0.5, 1.0)}) {
    for (BoundarySide side : s->boundaries()) {
      const BoundaryData b = s->boundary_data(side);
      const Mat2 gs = boundary_chirality(make_frame(), b.normal);
      for (int tk : {1, -1, 3, 7}) {
        const BoundaryDirac bd = boundary_dirac_matrix(*s, side, FourierMode(tk));
        CHECK(max_abs(gs * bd.boundary_connection - bd.boundary_connection * gs) <= 1e-14);
      }
    }
  }
  CHECK(max_abs(g * g - id) == 0.0);
}

TEST_CASE("non-unit normal is rejected") {
  CHECK_THROWS_WITH_AS(boundary_chirality(make_frame(), Covector(1.1, 0.0)),
                       doctest::Contains("normalization"), Error);
}

TEST_CASE("chirality projectors") {
  const CliffordFrame& fr = make_frame();
  Random rnd;
  for (int i = 0; i < 50; ++i) {
    const Mat2 g = boundary_chirality(fr, rnd.unit());
    const Projectors p = eigen_projectors(g);
    CHECK(max_abs(p.plus + p.minus - id) <= 1e-15);
    CHECK(max_abs(p.plus * p.plus - p.plus) <= 1e-14);
    CHECK(max_abs(p.minus * p.minus - p.minus) <= 1e-14);
    CHECK(max_abs(p.plus * p.minus) <= 1e-14);
  }
}
