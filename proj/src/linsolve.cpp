#include "strayfem/linsolve.hpp"

#include <cmath>
#include <string>

#include "strayfem/errors.hpp"

namespace strayfem {

namespace {

double dot_serial(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

std::vector<double> solve_cg(const CsrMatrix& A, const std::vector<double>& b,
                             const SolverConfig& config, SolveStats* stats) {
  const std::size_t n = std::size_t(A.n);
  if (b.size() != n) throw ConfigError("right-hand side size does not match the matrix");
  if (!(config.tol > 0.0)) throw ConfigError("solver tolerance must be positive");

  std::vector<double> x(n, 0.0);
  SolveStats local;
  const double bnorm = std::sqrt(dot_serial(b, b));
  if (bnorm == 0.0) {
    local.converged = true;
    if (stats) *stats = local;
    return x;
  }

  std::vector<double> inv_diag;
  if (config.jacobi) {
    inv_diag = A.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(inv_diag[i] > 0.0))
        throw ConfigError("matrix diagonal is not positive at row " + std::to_string(i));
      inv_diag[i] = 1.0 / inv_diag[i];
    }
  }
  auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
    if (config.jacobi) {
      for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    } else {
      z = r;
    }
  };

  const int max_iter =
      config.max_iter > 0 ? config.max_iter : int(20.0 * std::sqrt(double(n)) + 1000.0);

  std::vector<double> r = b;
  std::vector<double> z(n), p(n), q(n);
  precondition(r, z);
  p = z;
  double rz = dot_serial(r, z);
  double best_rel = 1.0;

  for (int it = 0; it < max_iter; ++it) {
    A.matvec(p, q);
    const double alpha = rz / dot_serial(p, q);
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];

    const double rel = std::sqrt(dot_serial(r, r)) / bnorm;
    best_rel = std::min(best_rel, rel);
    local.iterations = it + 1;
    if (config.on_iterate) config.on_iterate(it + 1, x);
    if (rel <= config.tol) {
      local.converged = true;
      local.relative_residual = rel;
      if (stats) *stats = local;
      return x;
    }

    precondition(r, z);
    const double rz_next = dot_serial(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  throw NonConvergence("conjugate gradients stalled after " + std::to_string(max_iter) +
                           " iterations (best relative residual " + std::to_string(best_rel) + ")",
                       max_iter, best_rel);
}

}  // namespace strayfem
