// Command line front end for the stray-field benchmark solver.
//
// Exit codes: 0 success, 2 invalid configuration, 3 solver or numerical
// failure, 4 I/O failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "strayfem/driver.hpp"
#include "strayfem/errors.hpp"
#include "strayfem/vtk_io.hpp"

namespace {

using namespace strayfem;

struct CommonOptions {
  RunParams params;
  std::string csv_path;
};

void add_run_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--case", opt.params.case_name, "benchmark case")
      ->check(CLI::IsMember(case_names()))
      ->capture_default_str();
  cmd->add_option("-L,--level", opt.params.level, "refinement level")->capture_default_str();
  cmd->add_option("--mu", opt.params.mu, "grading exponent in (0,1]")->capture_default_str();
  cmd->add_option("--gamma", opt.params.gamma, "far-field decay exponent (> -1/2)")
      ->capture_default_str();
  cmd->add_option("--r-big", opt.params.R0, "core circumradius (0 = case default)")
      ->capture_default_str();
  cmd->add_option("--quad-degree", opt.params.assembly.infinite_degree,
                  "quadrature degree on star elements")
      ->capture_default_str();
  cmd->add_option("--load-degree", opt.params.assembly.inside_degree,
                  "quadrature degree for non-constant magnetization")
      ->capture_default_str();
  cmd->add_option("--cut-degree", opt.params.assembly.cut_degree,
                  "quadrature degree on cut elements")
      ->capture_default_str();
  cmd->add_flag("--no-subdivide-cut", [&opt](std::int64_t) { opt.params.assembly.subdivide_cut = false; },
                "sample cut elements without local subdivision");
  cmd->add_option("--tol", opt.params.solver_tol, "CG relative residual target")
      ->capture_default_str();
  cmd->add_option("--max-iter", opt.params.max_iter, "CG iteration cap (0 = automatic)")
      ->capture_default_str();
  cmd->add_flag("--deterministic", opt.params.deterministic,
                "zero out timing fields for byte-identical output");
  cmd->add_flag("--skip-e0", opt.params.skip_e0, "skip the weighted potential error");
}

void write_records(const std::string& path, const std::vector<RunRecord>& records) {
  if (path.empty() || path == "-") {
    write_csv(std::cout, records);
    return;
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  write_csv(os, records);
  if (!os) throw IoError("write to '" + path + "' failed");
}

void check_workers_env() {
  const char* env = std::getenv("STRAYFIELD_WORKERS");
  if (!env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1)
    throw ConfigError("STRAYFIELD_WORKERS must be a positive integer");
  if (n > 1)
    std::cerr << "note: assembly and solves run serially for reproducibility; "
                 "STRAYFIELD_WORKERS=" << n << " has no effect\n";
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Truncation-free stray-field benchmark solver"};
  app.require_subcommand(1);

  CommonOptions solve_opt;
  std::string vtk_central, vtk_star, matrix_path;
  CLI::App* solve = app.add_subcommand("solve", "run one case at one level");
  add_run_options(solve, solve_opt);
  solve->add_option("--csv", solve_opt.csv_path, "write the run record as CSV ('-' = stdout)");
  solve->add_option("--vtk-central", vtk_central, "write the central mesh and potential");
  solve->add_option("--vtk-star", vtk_star, "write the star mesh and far factor");
  solve->add_option("--dump-matrix", matrix_path, "write the system matrix (MatrixMarket)");

  CommonOptions conv_opt;
  int level_min = 2, level_max = 5;
  CLI::App* converge = app.add_subcommand("converge", "run a refinement sweep");
  add_run_options(converge, conv_opt);
  converge->add_option("--level-min", level_min, "coarsest level")->capture_default_str();
  converge->add_option("--level-max", level_max, "finest level")->capture_default_str();
  converge->add_option("--csv", conv_opt.csv_path, "output CSV path ('-' = stdout)");

  int audit_level = 3;
  double audit_mu = 0.5, audit_R0 = 4.0;
  CLI::App* audit = app.add_subcommand("mesh-audit", "build a mesh pair and report grading constants");
  audit->add_option("-L,--level", audit_level, "refinement level")->capture_default_str();
  audit->add_option("--mu", audit_mu, "grading exponent in (0,1]")->capture_default_str();
  audit->add_option("--r-big", audit_R0, "core circumradius")->capture_default_str();

  CommonOptions export_opt;
  std::string export_central, export_star;
  CLI::App* exp = app.add_subcommand("export", "solve and write VTK files");
  add_run_options(exp, export_opt);
  exp->add_option("--central", export_central, "output path for the central mesh");
  exp->add_option("--star", export_star, "output path for the star mesh");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  check_workers_env();

  if (solve->parsed()) {
    auto ctx = run_solve(solve_opt.params);
    if (!solve_opt.csv_path.empty()) {
      write_records(solve_opt.csv_path, {ctx->record});
    } else {
      std::printf("case=%s L=%d dof=%lld h=%.4g energy=%.8g", ctx->record.case_name.c_str(),
                  ctx->record.level, static_cast<long long>(ctx->record.dof), ctx->record.h,
                  ctx->record.energy);
      if (!std::isnan(ctx->record.e_energy)) std::printf(" e_energy=%.3g", ctx->record.e_energy);
      if (!std::isnan(ctx->record.e0)) std::printf(" e0=%.3g", ctx->record.e0);
      std::printf(" cg_iters=%d\n", ctx->record.cg_iters);
    }
    if (!vtk_central.empty()) write_vtk_central(vtk_central, ctx->space, ctx->field);
    if (!vtk_star.empty()) write_vtk_star(vtk_star, ctx->space, ctx->field);
    if (!matrix_path.empty()) {
      std::ofstream os(matrix_path);
      if (!os) throw IoError("cannot open '" + matrix_path + "' for writing");
      write_matrix_market(ctx->system.A, os);
      if (!os) throw IoError("write to '" + matrix_path + "' failed");
    }
  } else if (converge->parsed()) {
    if (level_min > level_max) throw ConfigError("--level-min exceeds --level-max");
    const auto records = run_sweep(conv_opt.params, level_min, level_max);
    write_records(conv_opt.csv_path, records);
  } else if (audit->parsed()) {
    const auto d = build_big_tetra_decomposition(audit_R0);
    const auto pair = build_mesh_pair(d, audit_level, audit_mu);
    const auto a = audit_grading(pair, d);
    std::printf("L=%d mu=%g R0=%g h=%.6g c0=%.4g c1*=%.4g c2*=%.4g c3*=%.4g "
                "min_r=%.4g origin_elems=%zu positive=%d conforming=%d\n",
                audit_level, audit_mu, audit_R0, a.h, a.c0, a.c1_star, a.c2_star, a.c3_star,
                a.min_vertex_radius, a.n_origin_elements, int(a.all_positive), int(a.conforming));
  } else if (exp->parsed()) {
    if (export_central.empty() && export_star.empty())
      throw ConfigError("export: give --central and/or --star output paths");
    export_opt.params.skip_e0 = true;
    auto ctx = run_solve(export_opt.params);
    if (!export_central.empty()) write_vtk_central(export_central, ctx->space, ctx->field);
    if (!export_star.empty()) write_vtk_star(export_star, ctx->space, ctx->field);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    // NonConvergence, MeshError, ToleranceNotMet and anything unexpected.
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
