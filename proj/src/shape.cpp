#include "thinring/shape.hpp"

#include "thinring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thinring {

namespace {

constexpr double kPi = std::numbers::pi;

// Quadrature nodes exact for trigonometric polynomials up to degree 3M+1.
int cubic_nodes(const FourierShape& shape) { return 4 * (shape.modes() + 1); }

}  // namespace

FourierShape FourierShape::zero(int modes) {
  if (modes < 1) throw std::invalid_argument("FourierShape: need at least one mode");
  return FourierShape(std::vector<double>(modes + 1, 0.0));
}

double FourierShape::value(double alpha) const {
  double sum = 0.0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) sum += coeffs[l] * std::cos(l * alpha);
  return sum;
}

double FourierShape::d1(double alpha) const {
  double sum = 0.0;
  for (std::size_t l = 1; l < coeffs.size(); ++l)
    sum -= static_cast<double>(l) * coeffs[l] * std::sin(l * alpha);
  return sum;
}

double FourierShape::d2(double alpha) const {
  double sum = 0.0;
  for (std::size_t l = 1; l < coeffs.size(); ++l)
    sum -= static_cast<double>(l * l) * coeffs[l] * std::cos(l * alpha);
  return sum;
}

double FourierShape::sup_norm() const {
  const int n = std::max(64, 16 * (modes() + 1));
  double best = 0.0;
  for (int j = 0; j < n; ++j) best = std::max(best, std::abs(value(2.0 * kPi * j / n)));
  return best;
}

BoundaryPoint boundary_point(const FourierShape& shape, double alpha) {
  BoundaryPoint p;
  p.alpha = alpha;
  p.theta = shape.value(alpha);
  p.dtheta = shape.d1(alpha);
  const double r = 1.0 + p.theta;
  p.x1 = r * std::cos(alpha);
  p.x2 = r * std::sin(alpha);
  p.metric = std::sqrt(p.dtheta * p.dtheta + r * r);
  return p;
}

BoundaryPoint BoundaryGrid::point(int j) const {
  BoundaryPoint p;
  p.alpha = alpha[j];
  p.theta = theta[j];
  p.dtheta = dtheta[j];
  p.x1 = x1[j];
  p.x2 = x2[j];
  p.metric = metric[j];
  return p;
}

double BoundaryGrid::weight() const { return 2.0 * kPi / n; }

BoundaryGrid build_grid(const FourierShape& shape, double eps, int n) {
  if (n < 4 || n % 2 != 0 || n < 4 * shape.modes()) {
    throw std::invalid_argument("build_grid: need an even n >= 4 * modes, got n = " +
                                std::to_string(n));
  }
  BoundaryGrid g;
  g.n = n;
  g.eps = eps;
  for (auto* v : {&g.alpha, &g.theta, &g.dtheta, &g.d2theta, &g.x1, &g.x2, &g.metric, &g.n1,
                  &g.n2, &g.h})
    v->resize(n);

  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * kPi * j / n;
    const double c = std::cos(a), s = std::sin(a);
    const double th = shape.value(a), dth = shape.d1(a), ddth = shape.d2(a);
    if (std::abs(th) > 0.5) {
      throw GeometryError("build_grid: |theta| exceeds 1/2 at alpha = " + std::to_string(a));
    }
    const double r = 1.0 + th;
    const double m = std::sqrt(dth * dth + r * r);
    g.alpha[j] = a;
    g.theta[j] = th;
    g.dtheta[j] = dth;
    g.d2theta[j] = ddth;
    g.x1[j] = r * c;
    g.x2[j] = r * s;
    g.metric[j] = m;
    // n = ((1+theta) X - theta' X^perp) / m with X^perp = (-sin, cos).
    g.n1[j] = (r * c + dth * s) / m;
    g.n2[j] = (r * s - dth * c) / m;
    const double axis = 1.0 + eps * g.x1[j];
    if (!(axis > 0.0)) {
      throw GeometryError("build_grid: boundary reaches the symmetry axis at alpha = " +
                          std::to_string(a));
    }
    const double planar = (r * r + 2.0 * dth * dth - r * ddth) / (m * m * m);
    g.h[j] = planar + eps * g.n1[j] / axis;
  }
  return g;
}

double area(const FourierShape& shape) {
  const int nq = cubic_nodes(shape);
  double sum = 0.0;
  for (int j = 0; j < nq; ++j) {
    const double r = 1.0 + shape.value(2.0 * kPi * j / nq);
    sum += r * r;
  }
  return 0.5 * sum * 2.0 * kPi / nq;
}

double moment_x1(const FourierShape& shape) {
  const int nq = cubic_nodes(shape);
  double sum = 0.0;
  for (int j = 0; j < nq; ++j) {
    const double a = 2.0 * kPi * j / nq;
    const double r = 1.0 + shape.value(a);
    sum += r * r * r * std::cos(a);
  }
  return sum * 2.0 * kPi / nq / 3.0;
}

FourierShape project_constraints(const FourierShape& shape) {
  if (shape.modes() < 1) throw std::invalid_argument("project_constraints: need a_0 and a_1");
  FourierShape out = shape;
  const int nq = cubic_nodes(out);
  const double w = 2.0 * kPi / nq;
  double defect = 0.0;
  for (int it = 0; it < 20; ++it) {
    double f_area = 0.0, f_mom = 0.0;
    double j00 = 0.0, j01 = 0.0, j10 = 0.0, j11 = 0.0;
    for (int j = 0; j < nq; ++j) {
      const double a = 2.0 * kPi * j / nq;
      const double c = std::cos(a);
      const double r = 1.0 + out.value(a);
      f_area += 0.5 * r * r;
      f_mom += r * r * r * c / 3.0;
      j00 += r;
      j01 += r * c;
      j10 += r * r * c;
      j11 += r * r * c * c;
    }
    f_area = f_area * w - kPi;
    f_mom *= w;
    defect = std::max(std::abs(f_area), std::abs(f_mom));
    if (defect <= 1e-14) return out;
    j00 *= w;
    j01 *= w;
    j10 *= w;
    j11 *= w;
    const double det = j00 * j11 - j01 * j10;
    if (!(std::abs(det) > 0.0)) break;
    out.coeffs[0] -= (j11 * f_area - j01 * f_mom) / det;
    out.coeffs[1] -= (-j10 * f_area + j00 * f_mom) / det;
  }
  const double a_def = std::abs(area(out) - kPi);
  const double m_def = std::abs(moment_x1(out));
  if (std::max(a_def, m_def) <= 1e-12) return out;
  throw ProjectionError("project_constraints: no convergence, defect " +
                        std::to_string(std::max(a_def, m_def)));
}

double sobolev_norm(const FourierShape& shape, int k) {
  double sum = 0.0;
  for (int l = 0; l <= shape.modes(); ++l) {
    const double weight = std::pow(1.0 + l, 2.0 * k) * (l == 0 ? 2.0 * kPi : kPi);
    sum += weight * shape.coeffs[l] * shape.coeffs[l];
  }
  return std::sqrt(sum);
}

}  // namespace thinring
