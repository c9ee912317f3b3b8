#pragma once

// Integral and pointwise identities evaluated on discrete spinor fields.
// Integrals use the midpoint rule on the field's cell centers with the
// measure 2 pi f dr; boundary circles carry length 2 pi f(r_b).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spinspec/conformal.hpp"
#include "spinspec/modifier.hpp"
#include "spinspec/spinor_field.hpp"

namespace spinspec {

struct IdentityReport {
  std::string name;
  double left = 0.0;
  double right = 0.0;
  double residual = 0.0;
  int n_cells = 0;
  double expected_order = 2.0;
};

IdentityReport make_report(std::string name, double left, double right, int n_cells);

// (phi, e0 . D^dM phi) at a boundary circle, from the extrapolated trace.
double boundary_dirac_term(const SpinorField& phi, BoundarySide side);

// int_dM (phi, e0 D^dM phi) - 1/2 int_dM H |phi|^2
//   = int_M |nabla phi|^2 + R/4 |phi|^2 - |D phi|^2.
// With `lambda` given, |D phi|^2 is taken as lambda^2 |phi|^2.
IdentityReport sl_residual(const SpinorField& phi, std::optional<double> lambda = std::nullopt);

// Boundary connection: intrinsic (1/f_b) d/dtheta on the trace versus
// nabla_2 - 1/2 H e0 . e2 . applied to the extrapolated ambient data.
IdentityReport rtc2_residual(const SpinorField& phi);

struct EnergyMomentum {
  std::vector<Eigen::Matrix2d> q;  // per node; zero where excluded
  std::vector<bool> excluded;
  int excluded_count = 0;
  double epsilon = 0.0;  // 1e-8 max |phi|^2
};

// Throws numerical error "vanishing spinor" if every node is excluded.
EnergyMomentum energy_momentum(const SpinorField& phi);

// max over retained nodes of |tr Q - lambda|.
IdentityReport trace_q_residual(const SpinorField& phi, const EnergyMomentum& q, double lambda);

enum class GradientVariant { gcm, emtm };

// int |nabla^{a,u} phi|^2 directly versus the expanded form
// |nabla phi|^2 - (lambda^2/n)|phi|^2 (or - |Q|^2 |phi|^2)
//   + a^2 (1 - 1/n) |du|^2 |phi|^2 + a <du, d|phi|^2>.
IdentityReport modified_gradient_norm(const SpinorField& phi, const ModifierPair& mp,
                                      double lambda, GradientVariant variant, int n = 2);

enum class EqVariant { eq1, eq2, eq3, eq4 };
const char* to_string(EqVariant v);

// eq1/eq2 on the source; eq3/eq4 push phi to the conformal metric given by
// `rescaling` and compare the target-side modified gradient norm with the
// source-side right hand side. There the conformal factor of `rescaling`
// is the u of the modifier; mp.u is ignored.
IdentityReport eq_residual(const SpinorField& phi, double lambda, const ModifierPair& mp,
                           EqVariant which, const ConformalRescaling* rescaling = nullptr,
                           int n = 2);

// max_{j,i} |nabla_i phi + (lambda/n) e^i phi + a u_i phi + (a/n) u_j e^i e^j phi| / max |phi|
double killing_residual(const SpinorField& phi, double lambda, const ModifierPair& mp, int n = 2);

struct ConformalPush {
  SpinorField psi;
  double residual = 0.0;  // || Dbar psi - lambda e^{-u} psi || / || psi || on the target
};
// psi = e^{-u/2} phi on a target grid with as many cells as phi.
ConformalPush conformal_push(const SpinorField& phi, double lambda,
                             const ConformalRescaling& rescaling);

// L^2 norm over interior nodes (two cells from each end) of
// D^2 phi - nabla^* nabla phi - R/4 phi, relative to ||phi||. Pointwise the
// defect grows like h^2 / f near a pole, so the max norm is only O(h).
double lichnerowicz_residual(const SpinorField& phi);

}  // namespace spinspec
