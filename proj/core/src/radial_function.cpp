#include "spinspec/radial_function.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinspec/error.hpp"

namespace spinspec {

RadialFunction RadialFunction::constant(double c) {
  std::ostringstream os;
  os.precision(17);
  os << "const:" << c;
  return {[c](double) { return RadialSample{c, 0.0, 0.0}; }, os.str()};
}

RadialFunction RadialFunction::polynomial(std::vector<double> coefficients) {
  std::ostringstream os;
  os.precision(17);
  os << "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) os << (i ? "," : "") << coefficients[i];
  return {[c = std::move(coefficients)](double r) {
            // Horner for value and both derivatives
            RadialSample s;
            for (std::size_t i = c.size(); i-- > 0;) {
              s.d2 = s.d2 * r + 2.0 * s.d1;
              s.d1 = s.d1 * r + s.value;
              s.value = s.value * r + c[i];
            }
            return s;
          },
          os.str()};
}

RadialFunction RadialFunction::cosine_bump(double amplitude, double r0, double r1) {
  std::ostringstream os;
  os.precision(17);
  os << "cos:" << amplitude;
  const double w = std::numbers::pi / (r1 - r0);
  return {[=](double r) {
            const double t = w * (r - r0);
            return RadialSample{amplitude * std::cos(t), -amplitude * w * std::sin(t),
                                -amplitude * w * w * std::cos(t)};
          },
          os.str()};
}

namespace {

std::vector<double> parse_list(const std::string& body, const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw config_error("cannot parse radial function '" + spec + "'");
    }
  }
  if (out.empty()) throw config_error("empty radial function '" + spec + "'");
  return out;
}

}  // namespace

RadialFunction RadialFunction::parse(const std::string& spec, double r0, double r1) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw config_error("radial function needs 'kind:args': " + spec);
  const std::string kind = spec.substr(0, colon);
  const auto args = parse_list(spec.substr(colon + 1), spec);
  if (kind == "const" && args.size() == 1) return constant(args[0]);
  if (kind == "poly") return polynomial(args);
  if (kind == "cos" && args.size() == 1) return cosine_bump(args[0], r0, r1);
  throw config_error("unknown radial function '" + spec + "'");
}

}  // namespace spinspec
