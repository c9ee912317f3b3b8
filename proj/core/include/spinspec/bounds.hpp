#pragma once

// Lower bounds for lambda_min^2 and the search for good modifier pairs.
// Infima over M are minima over the spectrum grid's cell centers.

#include <optional>
#include <string>
#include <vector>

#include "spinspec/identities.hpp"
#include "spinspec/modifier.hpp"
#include "spinspec/spectrum.hpp"

namespace spinspec {

inline constexpr double default_tol_report = 5e-3;
inline constexpr double default_tol_feasible = 1e-9;

struct BoundEntry {
  std::string name;  // friedrich, hijazi_Q, est1, est2, est3, est4
  std::optional<double> value;
  double margin = 0.0;  // boundary feasibility margin of the modifier used
  bool feasible = true;
  bool experimental = false;  // evaluated without pass/fail semantics
  bool pass = true;
  std::string note;
};

struct LimitingDisjuncts {
  BoundarySide side;
  double h_minus_du = 0.0;  // H - du(e0)
  double h = 0.0;
};

struct BoundReport {
  std::string scenario;
  BoundaryCondition bc = BoundaryCondition::local_plus;
  int n_cells = 0;
  double lambda_min = 0.0;
  double lambda_min_squared = 0.0;
  double tol_report = default_tol_report;
  std::vector<BoundEntry> entries;
  std::optional<double> aps_gap;  // lambda_min^2 - friedrich under APS-
  std::vector<LimitingDisjuncts> limiting;
  int q_excluded = 0;

  bool all_pass() const;
  const BoundEntry* find(const std::string& name) const;
};

struct ModifierChoice {
  ModifierPair interior = ModifierPair::zero();
  ModifierPair conformal = ModifierPair::zero();
};

// phi_min must be the eigenspinor of lambda_min on the spectrum's grid.
BoundReport evaluate_bounds(const Spectrum& spectrum, const SpinorField& phi_min,
                            const ModifierChoice& modifiers = {},
                            double tol_report = default_tol_report);

// (n / (4(n-1))) min R_{a,u}, min (R_{a,u}/4 + |Q|^2) and the Rhat analogues.
double est1_value(const WarpedSurface& s, const ModifierPair& mp, std::span<const double> nodes,
                  int n = 2);
double est3_value(const WarpedSurface& s, const ModifierPair& mp, std::span<const double> nodes,
                  int n = 2);
double est2_value(const WarpedSurface& s, const ModifierPair& mp, const SpinorField& phi,
                  const EnergyMomentum& q, bool conformal, int n = 2);

struct TracePoint {
  std::vector<double> parameters;
  double inf_scalar = 0.0;     // min R_{a,u} (or Rhat_{a,u}) over the grid
  std::optional<double> inf_with_q;  // min (scalar/4 + |Q|^2) when Q was supplied
  double margin = 0.0;
  bool feasible = false;
  double best_so_far = 0.0;    // best feasible inf_scalar up to this point
};

struct OptimizeResult {
  ModifierPair best = ModifierPair::zero();
  double achieved = 0.0;  // best feasible inf_scalar
  bool feasible_found = false;
  std::vector<TracePoint> trace;
};

// Nelder-Mead over the 16 spline parameters, maximizing min R_{a,u}
// (interior) or min Rhat_{a,u} (conformal) with an exact penalty on the
// feasibility margin. The simplex starts from the best of a few smooth
// seeds (constant a, parabolic u) and the a = u = 0 baseline.
OptimizeResult optimize_modifiers(const WarpedSurface& surface, FeasibilityVariant variant,
                                  int budget, std::span<const double> nodes,
                                  const SpinorField* phi = nullptr,
                                  const EnergyMomentum* q = nullptr);

}  // namespace spinspec
