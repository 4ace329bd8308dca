#include "strayfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "strayfem/errors.hpp"

namespace strayfem {

namespace {

void push_sym4(QuadratureRule& r, double a, double w) {
  // Orbit of (a,b,b,b), b = (1-a)/3.
  const double b = (1.0 - a) / 3.0;
  r.point.push_back({a, b, b, b});
  r.point.push_back({b, a, b, b});
  r.point.push_back({b, b, a, b});
  r.point.push_back({b, b, b, a});
  for (int i = 0; i < 4; ++i) r.weight.push_back(w);
}

void push_sym6(QuadratureRule& r, double e, double w) {
  // Orbit of (e,e,f,f), f = (1-2e)/2.
  const double f = (1.0 - 2.0 * e) / 2.0;
  const int pairs[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                           {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
  for (const auto& p : pairs) {
    std::array<double, 4> lam{};
    lam[p[0]] = e;
    lam[p[1]] = e;
    lam[p[2]] = f;
    lam[p[3]] = f;
    r.point.push_back(lam);
    r.weight.push_back(w);
  }
}

QuadratureRule make_rule_1() {
  QuadratureRule r;
  r.degree = 1;
  r.point.push_back({0.25, 0.25, 0.25, 0.25});
  r.weight.push_back(1.0);
  return r;
}

QuadratureRule make_rule_2() {
  QuadratureRule r;
  r.degree = 2;
  // (5 + 3 sqrt(5))/20 and its orbit.
  push_sym4(r, 0.5854101966249685, 0.25);
  return r;
}

QuadratureRule make_rule_5() {
  QuadratureRule r;
  r.degree = 5;
  // 14-point symmetric rule, all weights positive.
  push_sym4(r, 1.0 - 3.0 * 0.3108859192633005, 0.1126879257180162);
  push_sym4(r, 1.0 - 3.0 * 0.0927352503108912, 0.0734930431163619);
  push_sym6(r, 0.0455037041256497, 0.0425460207770812);
  return r;
}

QuadratureRule make_rule_duffy(int degree) {
  // Collapse the tetrahedron onto the unit cube:
  //   x = u, y = v (1-u), z = w (1-u)(1-v),  dV = (1-u)^2 (1-v) du dv dw.
  // The substitution raises the per-axis degree by at most 2, so n points
  // per axis are exact for total degree d whenever 2n-1 >= d+2.
  const int n = (degree + 4) / 2;
  const auto gl = gauss_legendre_01(n);

  QuadratureRule r;
  r.degree = degree;
  r.point.reserve(std::size_t(n) * n * n);
  r.weight.reserve(std::size_t(n) * n * n);
  for (const auto& [u, wu] : gl) {
    for (const auto& [v, wv] : gl) {
      for (const auto& [w, ww] : gl) {
        const double x = u;
        const double y = v * (1.0 - u);
        const double z = w * (1.0 - u) * (1.0 - v);
        const double jac = (1.0 - u) * (1.0 - u) * (1.0 - v);
        r.point.push_back({1.0 - x - y - z, x, y, z});
        // The cube rule integrates against du dv dw; dividing by the
        // reference volume 1/6 restores volume-fraction normalization.
        r.weight.push_back(wu * wv * ww * jac * 6.0);
      }
    }
  }
  return r;
}

}  // namespace

const QuadratureRule& tet_rule(int degree) {
  if (degree < 1) throw ConfigError("quadrature degree must be >= 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(degree);
  if (it != cache.end()) return it->second;

  QuadratureRule r;
  switch (degree) {
    case 1: r = make_rule_1(); break;
    case 2: r = make_rule_2(); break;
    case 5: r = make_rule_5(); break;
    default: r = make_rule_duffy(degree); break;
  }
  return cache.emplace(degree, std::move(r)).first->second;
}

std::vector<std::pair<double, double>> gauss_legendre_01(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre size must be >= 1");
  std::vector<std::pair<double, double>> out(n);
  for (int k = 0; k < n; ++k) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1]; nodes come out in descending order, reverse it.
    out[n - 1 - k] = {(x + 1.0) / 2.0, w / 2.0};
  }
  return out;
}

namespace {

// Embedded pair on one interval: GL(7) as the estimate, the difference to
// GL(4) as the error indicator.
double gl_fixed(const std::function<double(double)>& f, double a, double b, int n) {
  static const auto gl4 = gauss_legendre_01(4);
  static const auto gl7 = gauss_legendre_01(7);
  const auto& gl = (n == 4) ? gl4 : gl7;
  double acc = 0.0;
  for (const auto& [t, w] : gl) acc += w * f(a + (b - a) * t);
  return (b - a) * acc;
}

double adapt_1d(const std::function<double(double)>& f, double a, double b, double tol,
                int depth) {
  const double coarse = gl_fixed(f, a, b, 4);
  const double fine = gl_fixed(f, a, b, 7);
  const double err = std::abs(fine - coarse);
  if (err <= tol || b - a < 1e-300) return fine;
  if (depth <= 0)
    throw ToleranceNotMet("adaptive 1d quadrature: max depth reached", fine, err);
  const double m = 0.5 * (a + b);
  return adapt_1d(f, a, m, tol / 2.0, depth - 1) + adapt_1d(f, m, b, tol / 2.0, depth - 1);
}

struct BoxCell {
  Box3 box;
  double integral = 0.0;  // one-level refined estimate
  double error = 0.0;     // |refined - single cell|
};

bool operator<(const BoxCell& a, const BoxCell& b) { return a.error < b.error; }

double box_gl3(const std::function<double(const Vec3&)>& f, const Box3& box) {
  static const auto gl = gauss_legendre_01(3);
  const Vec3 ext = box.hi - box.lo;
  double acc = 0.0;
  for (const auto& [u, wu] : gl)
    for (const auto& [v, wv] : gl)
      for (const auto& [w, ww] : gl)
        acc += wu * wv * ww * f({box.lo.x + ext.x * u, box.lo.y + ext.y * v, box.lo.z + ext.z * w});
  return acc * ext.x * ext.y * ext.z;
}

BoxCell evaluate_cell(const std::function<double(const Vec3&)>& f, const Box3& box) {
  BoxCell cell;
  cell.box = box;
  const double coarse = box_gl3(f, box);
  const Vec3 mid = 0.5 * (box.lo + box.hi);
  double fine = 0.0;
  for (int i = 0; i < 8; ++i) {
    Box3 child;
    child.lo = {(i & 1) ? mid.x : box.lo.x, (i & 2) ? mid.y : box.lo.y, (i & 4) ? mid.z : box.lo.z};
    child.hi = {(i & 1) ? box.hi.x : mid.x, (i & 2) ? box.hi.y : mid.y, (i & 4) ? box.hi.z : mid.z};
    fine += box_gl3(f, child);
  }
  cell.integral = fine;
  cell.error = std::abs(fine - coarse);
  return cell;
}

}  // namespace

double integrate_adaptive_1d(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, int max_depth) {
  return adapt_1d(f, a, b, abs_tol, max_depth);
}

double integrate_adaptive_box(const std::function<double(const Vec3&)>& f, const Box3& box,
                              double abs_tol, std::size_t max_cells) {
  std::priority_queue<BoxCell> queue;
  queue.push(evaluate_cell(f, box));
  std::size_t cells = 1;
  double total_err = queue.top().error;
  double total_int = queue.top().integral;

  while (total_err > abs_tol) {
    if (cells >= max_cells) {
      throw ToleranceNotMet("adaptive box quadrature: cell budget exhausted", total_int,
                            total_err);
    }
    BoxCell worst = queue.top();
    queue.pop();
    total_err -= worst.error;
    total_int -= worst.integral;

    const Vec3 mid = 0.5 * (worst.box.lo + worst.box.hi);
    for (int i = 0; i < 8; ++i) {
      Box3 child;
      child.lo = {(i & 1) ? mid.x : worst.box.lo.x, (i & 2) ? mid.y : worst.box.lo.y,
                  (i & 4) ? mid.z : worst.box.lo.z};
      child.hi = {(i & 1) ? worst.box.hi.x : mid.x, (i & 2) ? worst.box.hi.y : mid.y,
                  (i & 4) ? worst.box.hi.z : mid.z};
      BoxCell c = evaluate_cell(f, child);
      total_err += c.error;
      total_int += c.integral;
      queue.push(std::move(c));
      ++cells;
    }
  }
  return total_int;
}

}  // namespace strayfem
