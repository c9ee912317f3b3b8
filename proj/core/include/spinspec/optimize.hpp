#pragma once

#include <functional>
#include <vector>

namespace spinspec {

struct NelderMeadOptions {
  int budget = 1000;         // objective evaluations
  double initial_step = 0.1;
  double tolerance = 1e-10;  // simplex spread that triggers a restart
  // Edge directions of the initial simplex (dim vectors of length dim);
  // coordinate axes when empty.
  std::vector<std::vector<double>> directions;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int restarts = 0;
};

// Minimizes f from x0 with the dimension-adaptive coefficients of Gao and
// Han (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink
// 1 - 1/n). When the simplex collapses before the budget is used
// the search restarts around the incumbent, so the whole budget is spent.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options);

}  // namespace spinspec
