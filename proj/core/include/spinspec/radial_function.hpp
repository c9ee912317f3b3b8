#pragma once

#include <functional>
#include <string>
#include <vector>

namespace spinspec {

struct RadialSample {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// A smooth real function of the radial coordinate with two derivatives.
class RadialFunction {
 public:
  using Eval = std::function<RadialSample(double)>;

  RadialFunction() : RadialFunction(constant(0.0)) {}
  RadialFunction(Eval eval, std::string description)
      : eval_(std::move(eval)), description_(std::move(description)) {}

  RadialSample operator()(double r) const { return eval_(r); }
  double value(double r) const { return eval_(r).value; }
  const std::string& description() const { return description_; }

  static RadialFunction constant(double c);
  // sum_i c_i r^i
  static RadialFunction polynomial(std::vector<double> coefficients);
  // amplitude * cos(pi (r - r0) / (r1 - r0)); vanishing slope at both ends
  static RadialFunction cosine_bump(double amplitude, double r0, double r1);

  // Parses "const:<c>", "poly:<c0>,<c1>,...", "cos:<amplitude>" (the latter
  // needs the interval). Throws spinspec::Error(config) on malformed input.
  static RadialFunction parse(const std::string& spec, double r0, double r1);

 private:
  Eval eval_;
  std::string description_;
};

}  // namespace spinspec
