#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "spinspec/dirac.hpp"

namespace spinspec {

struct Eigenpair {
  double lambda = 0.0;
  FourierMode mode{1};
  int index = 0;           // rank within the mode by (|lambda|, sign)
  Eigen::VectorXd vector;  // unit Euclidean norm in the operator's basis; may be empty
};

// Deterministic order: |lambda|, then k, then sign (negative first).
bool spectral_less(const Eigenpair& a, const Eigenpair& b);

// All eigenvalues of one reduced mode, sorted within the mode. Eigenvectors
// are attached to the first `vectors` pairs, normalized with the first
// significant entry positive. An overdetermined mode has no eigenpairs. Throws numerical error if LAPACK fails.
std::vector<Eigenpair> solve_spectrum(const ModeOperator& op, int vectors = 0);

struct Spectrum {
  SurfacePtr surface;
  BoundaryCondition bc = BoundaryCondition::local_plus;
  int twice_k_max = 1;
  int n_cells = 0;
  std::vector<Eigenpair> pairs;  // every eigenvalue, spectral_less order, no vectors
  Eigenpair fundamental;         // lambda_min with its eigenvector
  std::shared_ptr<const ModeOperator> fundamental_operator;
  bool minimum_at_cutoff = false;  // lambda_min attained at |k| = K_max

  double lambda_min() const { return fundamental.lambda; }
  double lambda_min_squared() const { return fundamental.lambda * fundamental.lambda; }
};

// Modes compatible with the spin structure and |k| <= K_max.
std::vector<FourierMode> modes_up_to(SpinStructure spin, double k_max);

// Parallel over modes (SPINSPEC_THREADS), deterministic merge.
Spectrum aggregate(SurfacePtr surface, BoundaryCondition bc, double k_max, int n_cells);

struct ConvergenceRow {
  int n_cells = 0;
  double lambda_min = 0.0;
  double mode_k = 0.0;
  std::optional<double> order;  // from this row and the two before it
  std::optional<double> drift;  // |lambda(N) - lambda(N_prev)|
  bool converged = false;       // drift < 1e-3
};

// Observed order of a sequence of three values computed at n0 < n1 < n2
// cells, assuming error ~ C N^-p. Empty if the differences do not shrink.
std::optional<double> richardson_order(int n0, double v0, int n1, double v1, int n2, double v2);

std::vector<ConvergenceRow> convergence_study(SurfacePtr surface, BoundaryCondition bc,
                                              double k_max, const std::vector<int>& sizes);

}  // namespace spinspec
