#include "spinspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinspec/error.hpp"
#include "spinspec/optimize.hpp"

namespace spinspec {

bool BoundReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const BoundEntry& e) { return e.pass; });
}

const BoundEntry* BoundReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

namespace {

double min_of(const std::vector<double>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, x);
  return m;
}

}  // namespace

double est1_value(const WarpedSurface& s, const ModifierPair& mp, std::span<const double> nodes,
                  int n) {
  return n / (4.0 * (n - 1.0)) * min_of(modified_scalar(s, mp, nodes, n));
}

double est3_value(const WarpedSurface& s, const ModifierPair& mp, std::span<const double> nodes,
                  int n) {
  return n / (4.0 * (n - 1.0)) * min_of(conformal_modified_scalar(s, mp, nodes, n));
}

double est2_value(const WarpedSurface& s, const ModifierPair& mp, const SpinorField& phi,
                  const EnergyMomentum& q, bool conformal, int n) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < phi.size(); ++j) {
    if (q.excluded[j]) continue;
    const double r = phi.nodes()[j];
    const double scalar =
        conformal ? conformal_modified_scalar(s, mp, r, n) : modified_scalar(s, mp, r, n);
    m = std::min(m, 0.25 * scalar + q.q[j].squaredNorm());
  }
  return m;
}

BoundReport evaluate_bounds(const Spectrum& spectrum, const SpinorField& phi,
                            const ModifierChoice& modifiers, double tol_report) {
  if (phi.size() != spectrum.n_cells) {
    throw config_error("bounds must be evaluated on the spectrum's grid");
  }
  const WarpedSurface& s = *spectrum.surface;
  const auto& nodes = phi.nodes();
  const EnergyMomentum q = energy_momentum(phi);

  BoundReport rep;
  rep.scenario = s.name();
  rep.bc = spectrum.bc;
  rep.n_cells = spectrum.n_cells;
  rep.lambda_min = spectrum.lambda_min();
  rep.lambda_min_squared = spectrum.lambda_min_squared();
  rep.tol_report = tol_report;
  rep.q_excluded = q.excluded_count;
  const double lam2 = rep.lambda_min_squared;
  const ModifierPair zero = ModifierPair::zero();

  auto add = [&](const std::string& name, const ModifierPair& mp, FeasibilityVariant variant,
                 bool conformal_theorem, auto value_fn) {
    BoundEntry e;
    e.name = name;
    e.margin = feasibility_margin(s, mp, variant);
    e.feasible = e.margin >= -default_tol_feasible;
    // the conformal theorems are stated for local conditions only, and APS+
    // is outside the theory altogether
    e.experimental = is_experimental(spectrum.bc) || (conformal_theorem && !is_local(spectrum.bc));
    if (!e.feasible) {
      e.note = "skipped (infeasible)";
    } else {
      e.value = value_fn(mp);
      e.pass = e.experimental || lam2 >= *e.value - tol_report;
      if (e.experimental) e.note = "experimental";
    }
    rep.entries.push_back(std::move(e));
  };
  auto interior = [&](const ModifierPair& mp) { return est1_value(s, mp, nodes); };
  auto interior_q = [&](const ModifierPair& mp) { return est2_value(s, mp, phi, q, false); };
  auto conformal = [&](const ModifierPair& mp) { return est3_value(s, mp, nodes); };
  auto conformal_q = [&](const ModifierPair& mp) { return est2_value(s, mp, phi, q, true); };

  add("friedrich", zero, FeasibilityVariant::interior, false, interior);
  add("hijazi_Q", zero, FeasibilityVariant::interior, false, interior_q);
  add("est1", modifiers.interior, FeasibilityVariant::interior, false, interior);
  add("est2", modifiers.interior, FeasibilityVariant::interior, false, interior_q);
  add("est3", modifiers.conformal, FeasibilityVariant::conformal, true, conformal);
  add("est4", modifiers.conformal, FeasibilityVariant::conformal, true, conformal_q);

  if (spectrum.bc == BoundaryCondition::aps_minus) rep.aps_gap = lam2 - est1_value(s, zero, nodes);
  for (BoundarySide side : s.boundaries()) {
    const BoundaryData b = s.boundary_data(side);
    const double du_e0 = b.normal_sign * modifiers.conformal.u(b.r).d1;
    rep.limiting.push_back({side, b.mean_curvature - du_e0, b.mean_curvature});
  }
  return rep;
}

OptimizeResult optimize_modifiers(const WarpedSurface& surface, FeasibilityVariant variant,
                                  int budget, std::span<const double> nodes,
                                  const SpinorField* phi, const EnergyMomentum* q) {
  if (budget < 1) throw config_error("optimizer budget must be positive");
  if ((phi == nullptr) != (q == nullptr)) throw config_error("Q needs its spinor field");
  const bool conformal = variant == FeasibilityVariant::conformal;
  constexpr double penalty = 100.0;

  OptimizeResult out;
  out.achieved = -std::numeric_limits<double>::infinity();
  auto objective = [&](const std::vector<double>& params) {
    const ModifierPair mp = ModifierPair::from_parameters(surface, params);
    TracePoint tp;
    tp.parameters = params;
    tp.inf_scalar = min_of(conformal ? conformal_modified_scalar(surface, mp, nodes)
                                     : modified_scalar(surface, mp, nodes));
    tp.margin = feasibility_margin(surface, mp, variant);
    tp.feasible = tp.margin >= -default_tol_feasible && std::isfinite(tp.inf_scalar);
    if (phi) tp.inf_with_q = est2_value(surface, mp, *phi, *q, conformal);
    if (tp.feasible && tp.inf_scalar > out.achieved) {
      out.achieved = tp.inf_scalar;
      out.best = mp;
      out.feasible_found = true;
    }
    tp.best_so_far = out.achieved;
    out.trace.push_back(std::move(tp));
    const TracePoint& last = out.trace.back();
    if (!std::isfinite(last.inf_scalar)) return std::numeric_limits<double>::max();
    const double violation = std::isfinite(last.margin) ? std::max(0.0, -last.margin) : 0.0;
    return -(last.inf_scalar - penalty * violation);
  };

  NelderMeadOptions opts;
  opts.budget = budget;
  opts.initial_step = 0.25;
  // Shifted Legendre polynomials sampled at the knots, separately for a and
  // u: the first simplex explores smooth shapes instead of single knots.
  const int k = ModifierPair::knots;
  for (int block = 0; block < 2; ++block) {
    for (int degree = 0; degree < k; ++degree) {
      std::vector<double> dir(2 * k, 0.0);
      for (int i = 0; i < k; ++i) {
        const double x = 2.0 * i / (k - 1.0) - 1.0;
        dir[block * k + i] = std::legendre(static_cast<unsigned>(degree), x);
      }
      opts.directions.push_back(std::move(dir));
    }
  }
  // The a = u = 0 baseline sits on a plateau of the min-objective, so the
  // simplex starts from the best of a few smooth seeds: a constant, u a
  // parabola peaked at either end. Seeds count against the budget.
  std::vector<double> start(2 * k, 0.0);
  double start_value = objective(start);
  int used = 1;
  for (double a0 : {0.0, -0.5, 0.5, -1.0, 1.0}) {
    for (double c : {0.125, -0.125, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0}) {
      for (int end = 0; end < 2; ++end) {
        if (used >= budget / 4) break;
        std::vector<double> x(2 * k, a0);
        for (int i = 0; i < k; ++i) {
          const double t = static_cast<double>(i) / (k - 1);
          const double d = end == 0 ? t : 1.0 - t;
          x[k + i] = -c * d * d;
        }
        const double v = objective(x);
        ++used;
        if (v < start_value) {
          start_value = v;
          start = x;
        }
      }
    }
  }
  opts.budget = budget - used;
  if (opts.budget > 0) nelder_mead(objective, start, opts);
  if (!out.feasible_found) {
    out.best = ModifierPair::zero();
    out.achieved = min_of(conformal ? conformal_modified_scalar(surface, out.best, nodes)
                                    : modified_scalar(surface, out.best, nodes));
  }
  return out;
}

}  // namespace spinspec
