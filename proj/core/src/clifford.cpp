#include "spinspec/clifford.hpp"

#include <cmath>

#include "spinspec/error.hpp"

namespace spinspec {

namespace {

const Complex I{0.0, 1.0};

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

CliffordFrame build_frame() {
  CliffordFrame frame;
  // G1 = i sigma_x, G2 = i sigma_y
  frame.generators[0] << 0.0, I, I, 0.0;
  frame.generators[1] << 0.0, 1.0, -1.0, 0.0;
  return frame;
}

}  // namespace

const CliffordFrame& make_frame() {
  static const CliffordFrame frame = build_frame();
  return frame;
}

Mat2 clifford_matrix(const CliffordFrame& frame, const Covector& x) {
  return x(0) * frame.generators[0] + x(1) * frame.generators[1];
}

Spinor clifford_mul(const CliffordFrame& frame, const Covector& x, const Spinor& s) {
  return clifford_matrix(frame, x) * s;
}

Mat2 chirality(const CliffordFrame& frame) { return I * frame.volume(); }

Mat2 boundary_chirality(const CliffordFrame& frame, const Covector& normal) {
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw domain_error("normalization: boundary normal must be a unit covector");
  }
  return chirality(frame) * clifford_matrix(frame, normal);
}

Projectors eigen_projectors(const Mat2& gamma) {
  const Mat2 id = Mat2::Identity();
  return {0.5 * (id + gamma), 0.5 * (id - gamma)};
}

ChiralityAxiomResiduals chirality_axioms(const CliffordFrame& frame, const Mat2& f) {
  const Mat2 id = Mat2::Identity();
  ChiralityAxiomResiduals r{};
  r.square = max_abs(f * f - id);
  for (const Mat2& g : frame.generators) {
    r.anticommute = std::max(r.anticommute, max_abs(f * g + g * f));
  }
  r.commute = 0.0;
  r.unitary = max_abs(f.adjoint() * f - id);
  return r;
}

ChiralityAxiomResiduals boundary_chirality_axioms(const CliffordFrame& frame, const Mat2& gamma,
                                                  const Covector& normal) {
  const Mat2 id = Mat2::Identity();
  const Covector tangent{-normal(1), normal(0)};
  const Mat2 n = clifford_matrix(frame, normal);
  const Mat2 t = clifford_matrix(frame, tangent);
  ChiralityAxiomResiduals r{};
  r.square = max_abs(gamma * gamma - id);
  r.anticommute = max_abs(gamma * n + n * gamma);
  r.commute = max_abs(gamma * t - t * gamma);
  r.unitary = max_abs(gamma.adjoint() * gamma - id);
  return r;
}

}  // namespace spinspec
