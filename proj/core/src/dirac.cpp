#include "spinspec/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "spinspec/error.hpp"

namespace spinspec {

FourierMode FourierMode::from_k(double k) {
  const double twice = 2.0 * k;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-9) throw config_error("Fourier mode must be a multiple of 1/2");
  return FourierMode(static_cast<int>(rounded));
}

const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::local_plus: return "local+";
    case BoundaryCondition::local_minus: return "local-";
    case BoundaryCondition::aps_minus: return "aps-";
    case BoundaryCondition::aps_plus: return "aps+";
  }
  return "?";
}

BoundaryCondition parse_boundary_condition(const std::string& s) {
  if (s == "local+") return BoundaryCondition::local_plus;
  if (s == "local-") return BoundaryCondition::local_minus;
  if (s == "aps-") return BoundaryCondition::aps_minus;
  if (s == "aps+") return BoundaryCondition::aps_plus;
  throw config_error("unknown boundary condition '" + s + "' (expected local+, local-, aps-, aps+)");
}

std::shared_ptr<const RadialGrid> RadialGrid::make(SurfacePtr surface, int n_cells) {
  if (n_cells < 16) throw config_error("grid needs N >= 16 cells");
  auto g = std::make_shared<RadialGrid>();
  const double a = surface->r_min();
  g->n_cells = n_cells;
  g->h = surface->length() / n_cells;
  g->faces.resize(static_cast<std::size_t>(n_cells) + 1);
  g->centers.resize(static_cast<std::size_t>(n_cells));
  g->half_left.resize(static_cast<std::size_t>(n_cells));
  g->half_right.resize(static_cast<std::size_t>(n_cells));
  for (int i = 0; i <= n_cells; ++i) g->faces[i] = a + i * g->h;
  g->faces.back() = surface->r_max();
  for (int j = 0; j < n_cells; ++j) {
    g->centers[j] = a + (j + 0.5) * g->h;
    g->half_right[j] = surface->inverse_profile_integral(g->centers[j], g->faces[j + 1]);
    g->half_left[j] = (j == 0 && surface->is_cap())
                          ? std::numeric_limits<double>::infinity()
                          : surface->inverse_profile_integral(g->faces[j], g->centers[j]);
  }
  g->surface = std::move(surface);
  return g;
}

void ModeOperator::reindex() {
  center_pos_.assign(static_cast<std::size_t>(grid_->n_cells), -1);
  face_pos_.assign(static_cast<std::size_t>(grid_->n_cells) + 1, -1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto& slot = nodes_[i].on_face ? face_pos_ : center_pos_;
    slot[static_cast<std::size_t>(nodes_[i].index)] = static_cast<int>(i);
  }
}

ModeOperator assemble_mode_dirac(SurfacePtr surface, FourierMode mode, int n_cells) {
  return assemble_mode_dirac(RadialGrid::make(std::move(surface), n_cells), mode);
}

ModeOperator assemble_mode_dirac(std::shared_ptr<const RadialGrid> grid, FourierMode mode) {
  const WarpedSurface& s = *grid->surface;
  if (!mode.compatible_with(s.spin_structure())) {
    throw config_error("mode k = " + std::to_string(mode.k()) + " is incompatible with the " +
                       to_string(s.spin_structure()) + " spin structure of " + s.name());
  }
  const int n = grid->n_cells;
  const double h = grid->h;
  const double kk = std::abs(mode.k());
  const double sigma = mode.twice_k() >= 0 ? 1.0 : -1.0;
  const Component center = mode.twice_k() >= 0 ? Component::x : Component::y;
  const Component face = center == Component::x ? Component::y : Component::x;

  ModeOperator op;
  op.grid_ = grid;
  op.mode_ = mode;
  const int first_face = s.is_cap() ? 1 : 0;
  for (int j = 0; j <= n; ++j) {
    if (j >= first_face) {
      const double w = (j == 0 || j == n) ? 0.5 * h : h;
      op.nodes_.push_back({grid->faces[j], face, true, j, w});
    }
    if (j < n) op.nodes_.push_back({grid->centers[j], center, false, j, h});
  }

  // Unnormalized couplings, then symmetric scaling by the weights.
  const std::size_t m = op.nodes_.size();
  op.diag_.assign(m, 0.0);
  op.off_.assign(m - 1, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const GridNode& p = op.nodes_[i];
    const GridNode& q = op.nodes_[i + 1];
    double a = 0.0;
    if (p.on_face) {
      // face j-1 followed by center j-1 (0-based): left half-cell
      a = std::exp(-kk * grid->half_left[static_cast<std::size_t>(q.index)]);
    } else {
      a = -std::exp(kk * grid->half_right[static_cast<std::size_t>(p.index)]);
    }
    op.off_[i] = sigma * a / std::sqrt(p.weight * q.weight);
  }
  op.reindex();
  return op;
}

BoundaryDirac boundary_dirac_matrix(const WarpedSurface& surface, BoundarySide side,
                                    FourierMode mode) {
  const BoundaryData b = surface.boundary_data(side);
  const RadialSample p = surface.profile(b.r);
  const CliffordFrame& frame = make_frame();
  const Mat2& g2 = frame.generator(1);
  // nabla_2 on e^{ik theta} v is (ik/f) + (f'/(2f)) omega; the spin
  // connection terms are combined before the mode term so that their
  // cancellation on the boundary is exact.
  const Mat2 mode_term = Complex(0.0, mode.k() / p.value) * Mat2::Identity();
  const Mat2 spin_term = (0.5 * p.d1 / p.value) * frame.volume();
  BoundaryDirac out;
  out.normal = clifford_matrix(frame, b.normal);
  out.ambient_connection = mode_term + spin_term;
  out.boundary_connection = mode_term + (spin_term - 0.5 * b.mean_curvature * out.normal * g2);
  out.dirac = g2 * out.boundary_connection;
  out.normal_dirac = out.normal * out.dirac;
  return out;
}

namespace {

// Eigenvector xi of a Hermitian 2x2 matrix, as half-density direction
// (x, y) with xi = (x, i y) up to a phase.
AdmissibleDirection direction_from(const Spinor& xi) {
  Eigen::Vector2cd z(xi(0), Complex(0.0, -1.0) * xi(1));
  const int big = std::abs(z(0)) >= std::abs(z(1)) ? 0 : 1;
  z *= std::conj(z(big)) / std::abs(z(big));
  if (std::abs(z(0).imag()) + std::abs(z(1).imag()) > 1e-12) {
    throw numerical_error("boundary condition does not reduce to a real relation");
  }
  AdmissibleDirection d;
  d.x = z(0).real();
  d.y = z(1).real();
  return d;
}

}  // namespace

AdmissibleDirection admissible_direction(const WarpedSurface& surface, BoundarySide side,
                                         FourierMode mode, BoundaryCondition bc) {
  const CliffordFrame& frame = make_frame();
  const BoundaryData b = surface.boundary_data(side);
  if (is_local(bc)) {
    const Mat2 gamma = boundary_chirality(frame, b.normal);
    Eigen::SelfAdjointEigenSolver<Mat2> es(gamma);
    // eigenvalues ascending: -1 then +1
    const int col = bc == BoundaryCondition::local_plus ? 1 : 0;
    return direction_from(es.eigenvectors().col(col));
  }
  const BoundaryDirac bd = boundary_dirac_matrix(surface, side, mode);
  Eigen::SelfAdjointEigenSolver<Mat2> es(bd.normal_dirac);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale;
  // APS-: boundary values lie in the strictly negative eigenspace (kernel
  // excluded); APS+ mirrors it.
  for (int c = 0; c < 2; ++c) {
    const double mu = es.eigenvalues()(c);
    const bool keep = bc == BoundaryCondition::aps_minus ? mu < -tol : mu > tol;
    if (keep) return direction_from(es.eigenvectors().col(c));
  }
  AdmissibleDirection none;
  none.both_vanish = true;
  return none;
}

ModeOperator apply_boundary_condition(const ModeOperator& op, BoundaryCondition bc) {
  if (op.bc_) throw config_error("mode operator already carries a boundary condition");
  const WarpedSurface& s = op.surface();
  const int n = op.grid_->n_cells;
  const double sigma = op.mode_.twice_k() >= 0 ? 1.0 : -1.0;
  const bool center_is_x = op.center_component() == Component::x;

  ModeOperator out = op;
  out.bc_ = bc;
  std::vector<int> remove;
  for (BoundarySide side : s.boundaries()) {
    const AdmissibleDirection d = admissible_direction(s, side, op.mode_, bc);
    const int face = side == BoundarySide::outer ? n : 0;
    const int pos = op.face_node(face);
    if (d.both_vanish) {
      out.overdetermined_ = true;
      remove.push_back(pos);
      continue;
    }
    const double c_dir = center_is_x ? d.x : d.y;
    const double f_dir = center_is_x ? d.y : d.x;
    if (std::abs(f_dir) <= 1e-14 * std::hypot(c_dir, f_dir)) {
      remove.push_back(pos);
      continue;
    }
    // center trace = ratio * face value, closed through the half-cell
    const double ratio = c_dir / f_dir;
    const double side_sign = side == BoundarySide::outer ? 1.0 : -1.0;
    out.diag_[static_cast<std::size_t>(pos)] =
        sigma * side_sign * ratio / op.nodes_[static_cast<std::size_t>(pos)].weight;
  }

  if (!remove.empty()) {
    std::sort(remove.begin(), remove.end());
    std::vector<GridNode> nodes;
    std::vector<double> diag, off;
    for (std::size_t i = 0; i < out.nodes_.size(); ++i) {
      if (std::binary_search(remove.begin(), remove.end(), static_cast<int>(i))) continue;
      if (!nodes.empty()) {
        // removed entries are boundary faces, so survivors stay adjacent
        off.push_back(out.off_[i - 1]);
      }
      nodes.push_back(out.nodes_[i]);
      diag.push_back(out.diag_[i]);
    }
    out.nodes_ = std::move(nodes);
    out.diag_ = std::move(diag);
    out.off_ = std::move(off);
    out.reindex();
  }
  return out;
}

Eigen::MatrixXcd ModeOperator::hermitian_matrix() const {
  const int m = size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  auto u = [&](int i) {
    return nodes_[static_cast<std::size_t>(i)].component == Component::x ? Complex(1.0, 0.0)
                                                                          : Complex(0.0, 1.0);
  };
  for (int i = 0; i < m; ++i) {
    a(i, i) = diag_[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      const double v = off_[static_cast<std::size_t>(i)];
      a(i, i + 1) = u(i) * v * std::conj(u(i + 1));
      a(i + 1, i) = u(i + 1) * v * std::conj(u(i));
    }
  }
  return a;
}

double ModeOperator::hermiticity_residual() const {
  const Eigen::MatrixXcd a = hermitian_matrix();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace spinspec
