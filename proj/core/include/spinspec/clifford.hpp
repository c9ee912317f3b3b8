#pragma once

// Two-dimensional Clifford module: a fixed Pauli-type representation of the
// orthonormal coframe {e1, e2} acting on C^2, the interior chirality F and
// the boundary chirality Gamma = F . (normal .).
//
// Convention: e.e = -|e|^2 Id, generators skew-Hermitian. With this choice
// Clifford multiplication by a covector is an isometry up to |X|^2.

#include <array>
#include <complex>

#include <Eigen/Core>

namespace spinspec {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Spinor = Eigen::Vector2cd;
using Covector = Eigen::Vector2d;

struct CliffordFrame {
  std::array<Mat2, 2> generators;  // Clifford action of e^1, e^2

  const Mat2& generator(int a) const { return generators.at(static_cast<std::size_t>(a)); }
  // omega = G1 G2
  Mat2 volume() const { return generators[0] * generators[1]; }
};

// The representation used throughout the library (constructed once).
const CliffordFrame& make_frame();

// Matrix of Clifford multiplication by X = X_1 e^1 + X_2 e^2.
Mat2 clifford_matrix(const CliffordFrame& frame, const Covector& x);
Spinor clifford_mul(const CliffordFrame& frame, const Covector& x, const Spinor& s);

// Hermitian spinor metric, conjugate-linear in the first slot.
inline Complex pairing(const Spinor& s, const Spinor& t) { return s.dot(t); }

// F = i omega.
Mat2 chirality(const CliffordFrame& frame);

// Gamma = F . (normal .). Throws spinspec::Error("normalization") when
// |normal| differs from 1 by more than 1e-12.
Mat2 boundary_chirality(const CliffordFrame& frame, const Covector& normal);

struct Projectors {
  Mat2 plus;
  Mat2 minus;
};

// (Id +- Gamma) / 2
Projectors eigen_projectors(const Mat2& gamma);

// Residuals of the axioms, max-abs matrix norm. Useful for tests and the
// `verify` report.
struct ChiralityAxiomResiduals {
  double square;         // |F^2 - Id| or |Gamma^2 - Id|
  double anticommute;    // F: max_a |F G_a + G_a F| ; Gamma: |Gamma N + N Gamma|
  double commute;        // Gamma only: |Gamma T - T Gamma| for the tangent generator
  double unitary;        // |M^* M - Id|
};

ChiralityAxiomResiduals chirality_axioms(const CliffordFrame& frame, const Mat2& f);
ChiralityAxiomResiduals boundary_chirality_axioms(const CliffordFrame& frame, const Mat2& gamma,
                                                  const Covector& normal);

}  // namespace spinspec
