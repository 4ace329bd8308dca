#pragma once

// End-to-end orchestration of one benchmark run: decomposition, mesh pair,
// dof space, assembly, solve, error measures.  Shared by the command line
// tool and the acceptance harness.

#include <memory>
#include <string>
#include <vector>

#include "strayfem/analysis.hpp"
#include "strayfem/assembly.hpp"
#include "strayfem/linsolve.hpp"

namespace strayfem {

struct RunParams {
  std::string case_name = "sphere-uniform";
  int level = 3;
  double mu = 0.5;
  double gamma = 1.0;
  /// Core circumradius; 0 selects the case default.
  double R0 = 0.0;
  AssemblyOptions assembly;
  double solver_tol = 1e-10;
  int max_iter = 0;
  /// Zero out wall-clock fields so repeated runs emit identical bytes.
  bool deterministic = false;
  /// Skip the (quadrature-heavy) weighted potential error.
  bool skip_e0 = false;
};

/// Everything a run produces.  Heap-allocated and immovable because the dof
/// space points into the decomposition and mesh pair.
struct SolveContext {
  BenchmarkCase bench;
  SpaceDecomposition decomp;
  MeshPair pair;
  DofSpace space;
  SparseSystem system;
  FieldPair field;
  SolveStats stats;
  RunRecord record;

  SolveContext() = default;
  SolveContext(const SolveContext&) = delete;
  SolveContext& operator=(const SolveContext&) = delete;
};

std::unique_ptr<SolveContext> run_solve(const RunParams& params);

/// Runs levels [level_lo, level_hi] with otherwise fixed parameters.  When
/// keep is given, the full contexts are retained (in level order).
std::vector<RunRecord> run_sweep(RunParams params, int level_lo, int level_hi,
                                 std::vector<std::unique_ptr<SolveContext>>* keep = nullptr);

}  // namespace strayfem
