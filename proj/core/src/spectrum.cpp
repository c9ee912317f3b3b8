#include "spinspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <lapacke.h>

#include "spinspec/error.hpp"
#include "spinspec/parallel.hpp"

namespace spinspec {

bool spectral_less(const Eigenpair& a, const Eigenpair& b) {
  // |lambda| quantized at 1e-10 so mirror modes (k, -k) tie deterministically
  const double fa = std::round(std::abs(a.lambda) * 1e10);
  const double fb = std::round(std::abs(b.lambda) * 1e10);
  if (fa != fb) return fa < fb;
  if (a.mode.twice_k() != b.mode.twice_k()) return a.mode.twice_k() < b.mode.twice_k();
  return a.lambda < b.lambda;
}

namespace {

// Ascending eigenvalues, or the eigenvector for one ascending index.
std::vector<double> tridiagonal_eigenvalues(const ModeOperator& op) {
  const lapack_int n = op.size();
  std::vector<double> d = op.diagonal();
  std::vector<double> e = op.off_diagonal();
  e.resize(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'A', n, d.data(), e.data(), 0.0,
                                         0.0, 0, 0, 0.0, &found, w.data(), &dummy, 1,
                                         support.data());
  if (info != 0 || found != n) {
    throw numerical_error("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
  }
  return w;
}

Eigen::VectorXd tridiagonal_eigenvector(const ModeOperator& op, int ascending_index) {
  const lapack_int n = op.size();
  std::vector<double> d = op.diagonal();
  std::vector<double> e = op.off_diagonal();
  e.resize(static_cast<std::size_t>(n));
  double w[1];
  Eigen::VectorXd z(n);
  lapack_int support[2];
  lapack_int found = 0;
  const lapack_int il = ascending_index + 1;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0,
                                         0.0, il, il, 0.0, &found, w, z.data(), n, support);
  if (info != 0 || found != 1) {
    throw numerical_error("tridiagonal eigenvector solve failed (info " + std::to_string(info) + ")");
  }
  z.normalize();
  const double big = z.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z(i)) > 1e-10 * big) {
      if (z(i) < 0.0) z = -z;
      break;
    }
  }
  return z;
}

}  // namespace

std::vector<Eigenpair> solve_spectrum(const ModeOperator& op, int vectors) {
  if (op.overdetermined()) return {};
  const std::vector<double> w = tridiagonal_eigenvalues(op);
  std::vector<Eigenpair> out;
  out.reserve(w.size());
  std::vector<int> ascending(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) throw numerical_error("non-finite eigenvalue");
    Eigenpair p;
    p.lambda = w[i];
    p.mode = op.mode();
    out.push_back(p);
    ascending[i] = static_cast<int>(i);
  }
  std::vector<std::size_t> order(w.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spectral_less(out[a], out[b]); });
  std::vector<Eigenpair> sorted;
  sorted.reserve(out.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    Eigenpair p = out[order[r]];
    p.index = static_cast<int>(r);
    if (static_cast<int>(r) < vectors) p.vector = tridiagonal_eigenvector(op, ascending[order[r]]);
    sorted.push_back(std::move(p));
  }
  return sorted;
}

std::vector<FourierMode> modes_up_to(SpinStructure spin, double k_max) {
  if (!(k_max >= 0.5)) throw config_error("K_max must be at least 1/2");
  const int top = static_cast<int>(std::floor(2.0 * k_max + 1e-9));
  std::vector<FourierMode> modes;
  for (int t = -top; t <= top; ++t) {
    FourierMode m(t);
    if (m.compatible_with(spin)) modes.push_back(m);
  }
  return modes;
}

Spectrum aggregate(SurfacePtr surface, BoundaryCondition bc, double k_max, int n_cells) {
  const auto modes = modes_up_to(surface->spin_structure(), k_max);
  const auto grid = RadialGrid::make(surface, n_cells);
  std::vector<std::vector<Eigenpair>> per_mode(modes.size());
  std::vector<std::shared_ptr<const ModeOperator>> ops(modes.size());
  parallel_for(modes.size(), [&](std::size_t i) {
    auto op = std::make_shared<const ModeOperator>(
        apply_boundary_condition(assemble_mode_dirac(grid, modes[i]), bc));
    per_mode[i] = solve_spectrum(*op);
    ops[i] = std::move(op);
  });

  Spectrum s;
  s.surface = surface;
  s.bc = bc;
  s.n_cells = n_cells;
  int top = 0;
  for (const auto& m : modes) top = std::max(top, std::abs(m.twice_k()));
  s.twice_k_max = top;
  std::size_t best = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (per_mode[i].empty()) continue;
    if (per_mode[best].empty() || spectral_less(per_mode[i].front(), per_mode[best].front())) {
      best = i;
    }
    s.pairs.insert(s.pairs.end(), per_mode[i].begin(), per_mode[i].end());
  }
  if (s.pairs.empty()) throw numerical_error("empty spectrum");
  std::sort(s.pairs.begin(), s.pairs.end(), spectral_less);
  s.fundamental = solve_spectrum(*ops[best], 1).front();
  s.fundamental_operator = ops[best];
  s.minimum_at_cutoff = std::abs(modes[best].twice_k()) == top && top > 1;
  return s;
}

std::optional<double> richardson_order(int n0, double v0, int n1, double v1, int n2, double v2) {
  const double d01 = v0 - v1;
  const double d12 = v1 - v2;
  if (d12 == 0.0 || d01 == 0.0 || (d01 > 0) != (d12 > 0)) return std::nullopt;
  const double target = d01 / d12;
  const double a = n0, b = n1, c = n2;
  auto g = [&](double p) {
    return (std::pow(a, -p) - std::pow(b, -p)) / (std::pow(b, -p) - std::pow(c, -p)) - target;
  };
  const double lo = 1e-3, hi = 20.0;
  if (g(lo) * g(hi) > 0.0) return std::nullopt;
  boost::math::tools::eps_tolerance<double> tol(50);
  const auto root = boost::math::tools::bisect(g, lo, hi, tol);
  return 0.5 * (root.first + root.second);
}

std::vector<ConvergenceRow> convergence_study(SurfacePtr surface, BoundaryCondition bc,
                                              double k_max, const std::vector<int>& sizes) {
  if (sizes.empty()) throw config_error("convergence study needs grid sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw config_error("grid sizes must be ascending");
  }
  std::vector<ConvergenceRow> rows;
  for (int n : sizes) {
    const Spectrum s = aggregate(surface, bc, k_max, n);
    ConvergenceRow row;
    row.n_cells = n;
    row.lambda_min = s.lambda_min();
    row.mode_k = s.fundamental.mode.k();
    if (!rows.empty()) {
      row.drift = std::abs(row.lambda_min - rows.back().lambda_min);
      row.converged = *row.drift < 1e-3;
    }
    if (rows.size() >= 2) {
      const auto& r0 = rows[rows.size() - 2];
      const auto& r1 = rows.back();
      row.order = richardson_order(r0.n_cells, r0.lambda_min, r1.n_cells, r1.lambda_min, n,
                                   row.lambda_min);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spinspec
