#pragma once

// Fourier-mode reduction of the Dirac operator on a warped surface.
//
// A spinor e^{i k theta} v(r) in the frame (e1, e2) is written through the
// half-density components x, y:
//     v = (x, i y) / sqrt(f).
// Then D = lambda reduces to the real first-order system
//     lambda x = -y' - (k/f) y,      lambda y = x' - (k/f) x,
// which is flat in L^2(dr). The system is discretized on a staggered grid:
// one component lives on cell centers r_min + (j - 1/2) h, the other on
// faces r_min + j h, with the gauge E = exp(|k| int dr/f) folded into the
// stencil so the discrete operator is an exact summation-by-parts pair. For
// k >= 0, x sits on centers; for k < 0 the roles swap (the map
// (k, lambda, x, y) -> (-k, -lambda, y, x) is an exact symmetry). Unknowns are
// interleaved by position, so every mode matrix is symmetric tridiagonal.
//
// On a cap the pole face is not an unknown.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spinspec/clifford.hpp"
#include "spinspec/geometry.hpp"

namespace spinspec {

class FourierMode {
 public:
  // twice_k = 2k; odd for antiperiodic, even for periodic.
  explicit FourierMode(int twice_k) : twice_k_(twice_k) {}
  static FourierMode from_k(double k);

  double k() const { return 0.5 * twice_k_; }
  int twice_k() const { return twice_k_; }
  bool compatible_with(SpinStructure s) const {
    return (twice_k_ % 2 != 0) == (s == SpinStructure::antiperiodic);
  }
  bool operator==(const FourierMode&) const = default;

 private:
  int twice_k_;
};

enum class BoundaryCondition { local_plus, local_minus, aps_minus, aps_plus };

const char* to_string(BoundaryCondition bc);
// "local+", "local-", "aps-", "aps+"
BoundaryCondition parse_boundary_condition(const std::string& s);
inline bool is_local(BoundaryCondition bc) {
  return bc == BoundaryCondition::local_plus || bc == BoundaryCondition::local_minus;
}
// APS+ is implemented but not covered by the elliptic theory.
inline bool is_experimental(BoundaryCondition bc) { return bc == BoundaryCondition::aps_plus; }

// Staggered grid shared by all modes of one surface at one resolution.
struct RadialGrid {
  SurfacePtr surface;
  int n_cells = 0;
  double h = 0.0;
  std::vector<double> faces;    // n_cells + 1
  std::vector<double> centers;  // n_cells
  // int_{s_{j-1}}^{c_j} dr/f and int_{c_j}^{s_j} dr/f for j = 1..n_cells
  // (index j-1). The first left half-cell of a cap is singular and unused.
  std::vector<double> half_left;
  std::vector<double> half_right;

  static std::shared_ptr<const RadialGrid> make(SurfacePtr surface, int n_cells);
};

enum class Component { x, y };

struct GridNode {
  double r;
  Component component;
  bool on_face;
  int index;      // center j-1 or face j
  double weight;  // quadrature weight in dr
};

class ModeOperator {
 public:
  const WarpedSurface& surface() const { return *grid_->surface; }
  const RadialGrid& grid() const { return *grid_; }
  std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
  FourierMode mode() const { return mode_; }
  std::optional<BoundaryCondition> boundary_condition() const { return bc_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  // Both spinor components are forced to vanish at some boundary circle (APS
  // kernel at k = 0). The radial ODE then has only the zero solution and the
  // mode contributes no eigenvalues.
  bool overdetermined() const { return overdetermined_; }

  // Ordered by r. Entry i of an eigenvector is sqrt(weight_i) * component.
  const std::vector<GridNode>& nodes() const { return nodes_; }
  const std::vector<double>& diagonal() const { return diag_; }
  const std::vector<double>& off_diagonal() const { return off_; }

  // The operator in the complex spinor components: U M U^* with U = 1 on x
  // entries and i on y entries, Hermitian for the flat weighted product.
  Eigen::MatrixXcd hermitian_matrix() const;
  // max |M - M^*| of hermitian_matrix().
  double hermiticity_residual() const;

  // Centre-component index -> node position, face-component index -> node
  // position (or -1 if the face is not an unknown).
  int center_node(int j) const { return center_pos_[static_cast<std::size_t>(j)]; }
  int face_node(int j) const { return face_pos_[static_cast<std::size_t>(j)]; }
  Component center_component() const { return mode_.twice_k() >= 0 ? Component::x : Component::y; }

 private:
  friend ModeOperator assemble_mode_dirac(SurfacePtr, FourierMode, int);
  friend ModeOperator assemble_mode_dirac(std::shared_ptr<const RadialGrid>, FourierMode);
  friend ModeOperator apply_boundary_condition(const ModeOperator&, BoundaryCondition);

  void reindex();

  std::shared_ptr<const RadialGrid> grid_;
  FourierMode mode_{1};
  std::optional<BoundaryCondition> bc_;
  bool overdetermined_ = false;
  std::vector<GridNode> nodes_;
  std::vector<double> diag_;
  std::vector<double> off_;
  std::vector<int> center_pos_;
  std::vector<int> face_pos_;
};

// Throws config error for N < 16 or a mode incompatible with the spin
// structure. The result carries no boundary condition: the center component
// is implicitly zero beyond the last face.
ModeOperator assemble_mode_dirac(SurfacePtr surface, FourierMode mode, int n_cells);
ModeOperator assemble_mode_dirac(std::shared_ptr<const RadialGrid> grid, FourierMode mode);

struct BoundaryDirac {
  Mat2 normal;         // e0 .
  Mat2 dirac;          // D^dM restricted to the mode
  Mat2 normal_dirac;   // e0 . D^dM, Hermitian with eigenvalues +-|k|/f_b
  Mat2 ambient_connection;   // nabla_2 on the mode at the boundary circle
  Mat2 boundary_connection;  // nabla_2 - 1/2 H e0 . e2 .
};

// Built literally from the ambient spin connection and the second
// fundamental form; throws for the pole of a cap.
BoundaryDirac boundary_dirac_matrix(const WarpedSurface& surface, BoundarySide side,
                                    FourierMode mode);

// Admissible boundary values as a real ratio x : y (one direction), or none
// when both components must vanish.
struct AdmissibleDirection {
  bool both_vanish = false;
  double x = 0.0;
  double y = 0.0;
};
AdmissibleDirection admissible_direction(const WarpedSurface& surface, BoundarySide side,
                                         FourierMode mode, BoundaryCondition bc);

// Mode-by-mode restriction; throws if `op` already carries a condition.
ModeOperator apply_boundary_condition(const ModeOperator& op, BoundaryCondition bc);

// Spinor value at a point from half-density components: (x, i y) / sqrt(f).
inline Spinor spinor_from_components(double x, double y, double f) {
  const double s = 1.0 / std::sqrt(f);
  return Spinor(Complex(x * s, 0.0), Complex(0.0, y * s));
}

}  // namespace spinspec
