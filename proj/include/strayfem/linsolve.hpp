#pragma once

// Preconditioned conjugate gradients for the assembled SPD systems.  The
// matrix-vector products and reductions run serially in a fixed order, so
// repeated solves of the same system give bitwise identical iterates.

#include <functional>
#include <vector>

#include "strayfem/assembly.hpp"

namespace strayfem {

struct SolverConfig {
  /// Relative residual target |b - A x| / |b|.
  double tol = 1e-10;
  /// Iteration cap; <= 0 selects 20 sqrt(n) + 1000.
  int max_iter = 0;
  /// Diagonal (Jacobi) preconditioning.
  bool jacobi = true;
  /// Optional per-iteration observer (iteration index, current iterate).
  std::function<void(int, const std::vector<double>&)> on_iterate;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Solves A x = b from a zero start.  Returns the solution; throws
/// NonConvergence (carrying iteration count and best residual) when the
/// iteration cap is hit first.  b = 0 returns x = 0 immediately.
std::vector<double> solve_cg(const CsrMatrix& A, const std::vector<double>& b,
                             const SolverConfig& config = {}, SolveStats* stats = nullptr);

}  // namespace strayfem
