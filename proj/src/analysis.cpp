#include "strayfem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "strayfem/errors.hpp"
#include "strayfem/quadrature.hpp"

namespace strayfem {

namespace {

/// Integrates f(x, u_h(x)) over all of space: directly on the central
/// elements, through the inversion (weight rho^-6, value rho^gamma uhat) on
/// the star elements.
template <class F>
double integrate_with_field(const DofSpace& space, const FieldPair& u, int quad_degree, F&& f) {
  const QuadratureRule& rule = tet_rule(quad_degree);
  const SpaceDecomposition& d = *space.decomp;
  double total = 0.0;

  const TetMesh& central = space.pair->central;
  for (std::int32_t t = 0; t < std::int32_t(central.n_tets()); ++t) {
    const auto& k = central.tet[t];
    const double vol = central.tet_volume(t);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = bary_point(rule.point[q], central.vertex[k[0]], central.vertex[k[1]],
                                central.vertex[k[2]], central.vertex[k[3]]);
      double uh = 0.0;
      for (int a = 0; a < 4; ++a)
        uh += rule.point[q][a] * u.coeff[space.central_dof[k[a]]];
      acc += rule.weight[q] * f(x, uh);
    }
    total += vol * acc;
  }

  const TetMesh& star = space.pair->star;
  for (std::int32_t t = 0; t < std::int32_t(star.n_tets()); ++t) {
    const auto& k = star.tet[t];
    const Vec3 g = d.sectors[star.tet_sector[t]].gradient;
    const double vol = star.tet_volume(t);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 xs = bary_point(rule.point[q], star.vertex[k[0]], star.vertex[k[1]],
                                 star.vertex[k[2]], star.vertex[k[3]]);
      const double rho = dot(g, xs);
      double uhat = 0.0;
      for (int a = 0; a < 4; ++a) {
        const std::int32_t dof = space.star_dof[k[a]];
        if (dof >= 0) uhat += rule.point[q][a] * u.coeff[dof];
      }
      const double rho3 = rho * rho * rho;
      const Vec3 x = xs / (rho * rho);
      acc += rule.weight[q] / (rho3 * rho3) * f(x, std::pow(rho, space.gamma) * uhat);
    }
    total += vol * acc;
  }
  return total;
}

}  // namespace

double weighted_error(const DofSpace& space, const FieldPair& u, const BenchmarkCase& c,
                      int quad_degree) {
  const double num2 = integrate_with_field(space, u, quad_degree, [&](const Vec3& x, double uh) {
    const double e = uh - c.exact_potential(x);
    return e * e / (1.0 + norm2(x));
  });
  return std::sqrt(num2) / exact_weighted_norm(c);
}

double weighted_norm(const DofSpace& space, const FieldPair& u, int quad_degree) {
  const double n2 = integrate_with_field(space, u, quad_degree, [](const Vec3& x, double uh) {
    return uh * uh / (1.0 + norm2(x));
  });
  return std::sqrt(n2);
}

double discrete_energy(const std::vector<double>& b, const std::vector<double>& x) {
  if (b.size() != x.size()) throw ConfigError("energy: vector sizes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) acc += b[i] * x[i];
  return 0.5 * acc;
}

double energy_error(double discrete, double exact, double slack) {
  if (discrete > exact * (1.0 + slack))
    throw MeshError("discrete energy exceeds the exact energy beyond tolerance");
  return std::abs(discrete - exact) / std::abs(exact);
}

double convergence_slope(const std::vector<double>& h, const std::vector<double>& err,
                         int use_levels) {
  if (h.size() != err.size()) throw ConfigError("slope: vector sizes differ");
  std::vector<std::pair<double, double>> pts;  // (log h, log err)
  for (std::size_t i = 0; i < h.size(); ++i)
    if (std::isfinite(err[i]) && err[i] > 0.0 && h[i] > 0.0)
      pts.emplace_back(std::log(h[i]), std::log(err[i]));
  std::sort(pts.begin(), pts.end());  // ascending log h = finest first
  if (int(pts.size()) > use_levels) pts.resize(use_levels);
  if (pts.size() < 2) throw ConfigError("slope: need at least two valid levels");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [lx, ly] : pts) {
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = double(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<ProfileSample> radial_profile(const DofSpace& space, const FieldPair& u,
                                          const BenchmarkCase& c, const Vec3& direction,
                                          double t0, double t1, int samples, bool log_spacing) {
  if (!(t0 > 0.0) || !(t1 > t0) || samples < 2)
    throw ConfigError("profile: need 0 < t0 < t1 and at least two samples");
  if (log_spacing && !(t0 > 0.0)) throw ConfigError("profile: log spacing needs t0 > 0");
  const Vec3 dir = direction / norm(direction);

  std::vector<ProfileSample> out(samples);
  for (int i = 0; i < samples; ++i) {
    const double s = double(i) / (samples - 1);
    const double t = log_spacing ? t0 * std::pow(t1 / t0, s) : t0 + s * (t1 - t0);
    const Vec3 x = t * dir;
    out[i].radius = t;
    out[i].value = eval_potential(space, u, x).value;
    out[i].exact = c.has_exact_potential ? c.exact_potential(x)
                                         : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::string csv_header() { return "case,L,mu,gamma,R0,dof,h,e0,energy,e_energy,cg_iters,seconds"; }

std::string csv_row(const RunRecord& r) {
  char buf[512];
  auto g = [](double v, char* out, std::size_t cap) {
    if (std::isnan(v))
      std::snprintf(out, cap, "nan");
    else
      std::snprintf(out, cap, "%.12g", v);
  };
  char mu[32], gamma[32], R0[32], h[32], e0[32], en[32], ee[32];
  g(r.mu, mu, sizeof mu);
  g(r.gamma, gamma, sizeof gamma);
  g(r.R0, R0, sizeof R0);
  g(r.h, h, sizeof h);
  g(r.e0, e0, sizeof e0);
  g(r.energy, en, sizeof en);
  g(r.e_energy, ee, sizeof ee);
  std::snprintf(buf, sizeof buf, "%s,%d,%s,%s,%s,%lld,%s,%s,%s,%s,%d,%.3f", r.case_name.c_str(),
                r.level, mu, gamma, R0, static_cast<long long>(r.dof), h, e0, en, ee, r.cg_iters,
                r.seconds);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << csv_header() << "\n";
  for (const RunRecord& r : records) os << csv_row(r) << "\n";
}

}  // namespace strayfem
