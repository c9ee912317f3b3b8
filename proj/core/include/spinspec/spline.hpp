#pragma once

#include <optional>
#include <span>
#include <vector>

namespace spinspec {

// Interpolating C2 cubic spline on strictly increasing knots. Each end is
// either natural (s'' = 0) or clamped to a given first derivative.
class CubicSpline {
 public:
  struct End {
    std::optional<double> slope;  // nullopt: natural end
  };

  CubicSpline() = default;
  CubicSpline(std::vector<double> knots, std::vector<double> values, End left = {},
              End right = {});

  struct Sample {
    double value;
    double d1;
    double d2;
  };

  Sample operator()(double x) const;

  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;  // s'' at knots
};

}  // namespace spinspec
