#include "spinspec/spinor_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinspec/error.hpp"

namespace spinspec {

SpinorField::SpinorField(SurfacePtr surface, FourierMode mode, int n_cells)
    : surface_(std::move(surface)), mode_(mode) {
  if (n_cells < 3) throw config_error("spinor field needs at least 3 cells");
  h_ = surface_->length() / n_cells;
  nodes_.resize(static_cast<std::size_t>(n_cells));
  profile_.resize(nodes_.size());
  for (int j = 0; j < n_cells; ++j) {
    nodes_[j] = surface_->r_min() + (j + 0.5) * h_;
    profile_[j] = surface_->profile(nodes_[j]);
  }
}

void SpinorField::finish() { derivative_ = differentiate(values_, h_); }

std::vector<Spinor> differentiate(const std::vector<Spinor>& v, double h) {
  const std::size_t n = v.size();
  std::vector<Spinor> d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return d;
}

SpinorField SpinorField::from_eigenvector(const ModeOperator& op, const Eigen::VectorXd& u) {
  if (u.size() != op.size()) throw domain_error("eigenvector size does not match the operator");
  const RadialGrid& g = op.grid();
  SpinorField field(op.grid_ptr()->surface, op.mode(), g.n_cells);
  const auto& nodes = op.nodes();
  const int n = g.n_cells;

  // half-density value at a face divided by sqrt(f): the frame component
  auto face_component = [&](int i) {
    const int pos = op.face_node(i);
    if (pos < 0) return 0.0;
    const GridNode& node = nodes[static_cast<std::size_t>(pos)];
    return u(pos) / std::sqrt(node.weight) / std::sqrt(op.surface().profile(node.r).value);
  };
  std::vector<double> faces(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) faces[i] = face_component(i);

  const bool center_is_x = op.center_component() == Component::x;
  field.values_.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int pos = op.center_node(j);
    const double f = field.profile_[j].value;
    const double c = u(pos) / std::sqrt(nodes[static_cast<std::size_t>(pos)].weight) / std::sqrt(f);
    const double q = 0.5 * (faces[j] + faces[j + 1]);
    const double x = center_is_x ? c : q;
    const double y = center_is_x ? q : c;
    field.values_[j] = Spinor(Complex(x, 0.0), Complex(0.0, y));
  }
  const double norm = field.l2_norm();
  if (!(norm > 0.0)) throw numerical_error("zero eigenvector");
  for (auto& v : field.values_) v /= norm;
  field.finish();
  return field;
}

SpinorField SpinorField::sample(SurfacePtr surface, FourierMode mode, int n_cells,
                                const std::function<Spinor(double)>& v) {
  SpinorField field(std::move(surface), mode, n_cells);
  field.values_.reserve(field.nodes_.size());
  for (double r : field.nodes_) field.values_.push_back(v(r));
  field.finish();
  return field;
}

SpinorField SpinorField::sample(SurfacePtr surface, FourierMode mode, int n_cells,
                                const std::function<Spinor(double)>& v,
                                const std::function<Spinor(double)>& dv) {
  SpinorField field(std::move(surface), mode, n_cells);
  for (double r : field.nodes_) {
    field.values_.push_back(v(r));
    field.derivative_.push_back(dv(r));
  }
  return field;
}

Mat2 SpinorField::angular_connection(int j) const {
  const RadialSample& p = profile_[static_cast<std::size_t>(j)];
  return Complex(0.0, mode_.k() / p.value) * Mat2::Identity() +
         (0.5 * p.d1 / p.value) * make_frame().volume();
}

Spinor SpinorField::covariant(int i, int j) const {
  if (i == 0) return derivative_[static_cast<std::size_t>(j)];
  return angular_connection(j) * values_[static_cast<std::size_t>(j)];
}

Spinor SpinorField::dirac(int j) const {
  const CliffordFrame& frame = make_frame();
  return frame.generator(0) * covariant(0, j) + frame.generator(1) * covariant(1, j);
}

Spinor SpinorField::extrapolate(const std::vector<Spinor>& v, BoundarySide side) const {
  const std::size_t n = v.size();
  if (side == BoundarySide::inner) return (15.0 * v[0] - 10.0 * v[1] + 3.0 * v[2]) / 8.0;
  return (15.0 * v[n - 1] - 10.0 * v[n - 2] + 3.0 * v[n - 3]) / 8.0;
}

Spinor SpinorField::trace(BoundarySide side) const { return extrapolate(values_, side); }

double SpinorField::integrate(const std::function<double(int)>& g) const {
  double sum = 0.0;
  for (int j = 0; j < size(); ++j) sum += g(j) * profile_[static_cast<std::size_t>(j)].value;
  return 2.0 * std::numbers::pi * h_ * sum;
}

double SpinorField::l2_norm() const {
  return std::sqrt(integrate([&](int j) { return values_[static_cast<std::size_t>(j)].squaredNorm(); }));
}

double SpinorField::max_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, v.norm());
  return m;
}

Spinor SpinorField::value_at(double r) const {
  const double slack = 1e-12 * std::max(1.0, surface_->length());
  if (!(r >= surface_->r_min() - slack && r <= surface_->r_max() + slack)) {
    throw domain_error("interpolation point outside the grid");
  }
  const int n = size();
  const double t = (r - nodes_.front()) / h_;
  int start = static_cast<int>(std::floor(t)) - 1;
  start = std::clamp(start, 0, n - 4);
  Spinor out = Spinor::Zero();
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) w *= (t - (start + b)) / static_cast<double>(a - b);
    }
    out += w * values_[static_cast<std::size_t>(start + a)];
  }
  return out;
}

}  // namespace spinspec
