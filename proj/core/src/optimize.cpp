#include "spinspec/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spinspec/error.hpp"

namespace spinspec {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
  if (x0.empty()) throw config_error("Nelder-Mead needs at least one parameter");
  if (options.budget < 1) throw config_error("optimizer budget must be positive");
  const std::size_t dim = x0.size();
  NelderMeadResult best;
  best.x = x0;
  best.value = f(x0);
  best.evaluations = 1;

  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };

  const double n = static_cast<double>(dim);
  const double alpha = 1.0, gamma = 1.0 + 2.0 / n, rho = 0.75 - 0.5 / n;
  const double sigma = dim > 1 ? 1.0 - 1.0 / n : 0.5;
  if (!options.directions.empty() && options.directions.size() != dim) {
    throw config_error("simplex directions must match the dimension");
  }
  double step = options.initial_step;
  while (best.evaluations < options.budget) {
    std::vector<std::vector<double>> pts(dim + 1, best.x);
    std::vector<double> vals(dim + 1, best.value);
    for (std::size_t i = 0; i < dim && best.evaluations < options.budget; ++i) {
      if (options.directions.empty()) {
        pts[i + 1][i] += step;
      } else {
        for (std::size_t d = 0; d < dim; ++d) pts[i + 1][d] += step * options.directions[i][d];
      }
      vals[i + 1] = eval(pts[i + 1]);
    }
    std::vector<std::size_t> idx(dim + 1);
    while (best.evaluations < options.budget) {
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t lo = idx.front(), hi = idx.back(), second = idx[dim - 1];
      if (std::abs(vals[hi] - vals[lo]) <= options.tolerance * (1.0 + std::abs(vals[lo]))) break;

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t i = 0; i <= dim; ++i) {
        if (i == hi) continue;
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d] / dim;
      }
      auto along = [&](double t) {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d) x[d] = centroid[d] + t * (pts[hi][d] - centroid[d]);
        return x;
      };
      const auto xr = along(-alpha);
      const double fr = eval(xr);
      if (fr < vals[lo]) {
        if (best.evaluations >= options.budget) break;
        const auto xe = along(-gamma);
        const double fe = eval(xe);
        if (fe < fr) { pts[hi] = xe; vals[hi] = fe; } else { pts[hi] = xr; vals[hi] = fr; }
        continue;
      }
      if (fr < vals[second]) {
        pts[hi] = xr;
        vals[hi] = fr;
        continue;
      }
      if (best.evaluations >= options.budget) break;
      const bool outside = fr < vals[hi];
      const auto xc = along(outside ? -rho : rho);
      const double fc = eval(xc);
      if (fc < (outside ? fr : vals[hi])) {
        pts[hi] = xc;
        vals[hi] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= dim && best.evaluations < options.budget; ++i) {
        if (i == lo) continue;
        for (std::size_t d = 0; d < dim; ++d) pts[i][d] = pts[lo][d] + sigma * (pts[i][d] - pts[lo][d]);
        vals[i] = eval(pts[i]);
      }
    }
    ++best.restarts;
    step = std::max(0.5 * step, 1e-4);
  }
  return best;
}

}  // namespace spinspec
