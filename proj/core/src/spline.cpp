#include "spinspec/spline.hpp"

#include <algorithm>

#include "spinspec/error.hpp"

namespace spinspec {

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values, End left,
                         End right)
    : knots_(std::move(knots)), values_(std::move(values)) {
  const std::size_t n = knots_.size();
  if (n < 3 || values_.size() != n) {
    throw domain_error("spline needs at least 3 knots with matching values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw domain_error("spline knots must increase strictly");
  }

  // Tridiagonal system for the second derivatives (Thomas algorithm).
  std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = knots_[i] - knots_[i - 1];
    const double h1 = knots_[i + 1] - knots_[i];
    sub[i] = h0 / 6.0;
    diag[i] = (h0 + h1) / 3.0;
    sup[i] = h1 / 6.0;
    rhs[i] = (values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0;
  }
  const double hl = knots_[1] - knots_[0];
  if (left.slope) {
    diag[0] = hl / 3.0;
    sup[0] = hl / 6.0;
    rhs[0] = (values_[1] - values_[0]) / hl - *left.slope;
  } else {
    diag[0] = 1.0;
  }
  const double hr = knots_[n - 1] - knots_[n - 2];
  if (right.slope) {
    sub[n - 1] = hr / 6.0;
    diag[n - 1] = hr / 3.0;
    rhs[n - 1] = *right.slope - (values_[n - 1] - values_[n - 2]) / hr;
  } else {
    diag[n - 1] = 1.0;
  }

  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  second_.assign(n, 0.0);
  second_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    second_[i] = (rhs[i] - sup[i] * second_[i + 1]) / diag[i];
  }
}

CubicSpline::Sample CubicSpline::operator()(double x) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, knots_.size() - 1) - 1;

  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - x) / h;
  const double b = (x - knots_[i]) / h;
  const double m0 = second_[i];
  const double m1 = second_[i + 1];

  Sample s;
  s.value = a * values_[i] + b * values_[i + 1] +
            ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
  s.d1 = (values_[i + 1] - values_[i]) / h +
         (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
  s.d2 = a * m0 + b * m1;
  return s;
}

}  // namespace spinspec
