#include "strayfem/driver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace strayfem {

std::unique_ptr<SolveContext> run_solve(const RunParams& params) {
  auto ctx = std::make_unique<SolveContext>();
  ctx->bench = make_case(params.case_name);
  const double R0 = params.R0 > 0.0 ? params.R0 : ctx->bench.default_R0;

  const auto t_start = std::chrono::steady_clock::now();
  ctx->decomp = build_big_tetra_decomposition(R0);
  ctx->pair = build_mesh_pair(ctx->decomp, params.level, params.mu);
  ctx->space = build_dof_space(ctx->decomp, ctx->pair, params.gamma);
  ctx->system = assemble_system(ctx->space, ctx->bench, params.assembly);

  SolverConfig solver;
  solver.tol = params.solver_tol;
  solver.max_iter = params.max_iter;
  ctx->field.coeff = solve_cg(ctx->system.A, ctx->system.b, solver, &ctx->stats);
  const auto t_end = std::chrono::steady_clock::now();

  const double nan = std::numeric_limits<double>::quiet_NaN();
  RunRecord& rec = ctx->record;
  rec.case_name = params.case_name;
  rec.level = params.level;
  rec.mu = params.mu;
  rec.gamma = params.gamma;
  rec.R0 = R0;
  rec.dof = ctx->space.n_dofs;
  rec.h = ctx->pair.h;
  rec.energy = discrete_energy(ctx->system.b, ctx->field.coeff);
  rec.e_energy = std::isnan(ctx->bench.exact_energy)
                     ? nan
                     : energy_error(rec.energy, ctx->bench.exact_energy);
  rec.e0 = (ctx->bench.has_exact_potential && !params.skip_e0)
               ? weighted_error(ctx->space, ctx->field, ctx->bench)
               : nan;
  rec.cg_iters = ctx->stats.iterations;
  rec.seconds =
      params.deterministic
          ? 0.0
          : std::chrono::duration<double>(t_end - t_start).count();
  return ctx;
}

std::vector<RunRecord> run_sweep(RunParams params, int level_lo, int level_hi,
                                 std::vector<std::unique_ptr<SolveContext>>* keep) {
  std::vector<RunRecord> records;
  for (int level = level_lo; level <= level_hi; ++level) {
    params.level = level;
    auto ctx = run_solve(params);
    records.push_back(ctx->record);
    if (keep) keep->push_back(std::move(ctx));
  }
  return records;
}

}  // namespace strayfem
