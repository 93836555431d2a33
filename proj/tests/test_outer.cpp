#include "oracles.hpp"
#include "thinring/outer.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinring;
using oracle::kPi;

namespace {

FourierShape sample_shape() { return project_constraints(FourierShape({0.0, 0.0, 0.04, -0.02, 0.01})); }

}  // namespace

TEST_SUITE("outer") {

TEST_CASE("kress weights integrate the log kernel exactly on trig polynomials") {
  // int_0^{2pi} log(4 sin^2(t/2)) cos(m t) dt = -2 pi / m (m >= 1), 0 (m = 0).
  const int n = 32;
  const Eigen::VectorXd r = kress_weights(n);
  for (int m = 0; m < n / 2; ++m) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += r[k] * std::cos(2.0 * kPi * m * k / n);
    const double ref = m == 0 ? 0.0 : -2.0 * kPi / m;
    CHECK(sum == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("full kernel pointwise against the Cartesian formula") {
  const FourierShape s = sample_shape();
  auto th = [&](double a) { return s.value(a); };
  auto dth = [&](double a) { return s.d1(a); };
  for (double eps : {0.1, 0.01, 1e-3}) {
    for (double a : {0.3, 2.0, 4.4}) {
      for (double at : {0.31, 1.0, 3.5, 6.0}) {
        const KernelSplit k = full_kernel_split(boundary_point(s, a), boundary_point(s, at), eps);
        const double sn = std::sin(0.5 * (a - at));
        const double val = k.a * std::log(4.0 * sn * sn) + k.b;
        CHECK(std::abs(val - oracle::full_kernel(th, dth, a, at, eps)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("kernel symmetry") {
  // K(y, y~) / m(y~) is symmetric.
  const FourierShape s = sample_shape();
  for (double a : {0.2, 1.7}) {
    for (double at : {0.9, 3.3, 5.1}) {
      const BoundaryPoint p = boundary_point(s, a), q = boundary_point(s, at);
      const KernelSplit pq = full_kernel_split(p, q, 0.02), qp = full_kernel_split(q, p, 0.02);
      CHECK(std::abs(pq.a / q.metric - qp.a / p.metric) <= 1e-14);
      CHECK(std::abs(pq.b / q.metric - qp.b / p.metric) <= 1e-13);
    }
  }
}

TEST_CASE("diagonal limit by Richardson extrapolation") {
  const FourierShape s = sample_shape();
  const double eps = 0.02;
  for (double a : {0.0, 1.1, 2.5}) {
    const BoundaryPoint p = boundary_point(s, a);
    auto b_at = [&](double h) { return full_kernel_split(p, boundary_point(s, a + h), eps).b; };
    // b is smooth and even in h to leading order; eliminate h and h^2.
    const double h = 1e-3;
    const double r1 = 2.0 * b_at(h / 2) - b_at(h);
    const double r2 = 2.0 * b_at(h / 4) - b_at(h / 2);
    const double extrap = (4.0 * r2 - r1) / 3.0;
    CHECK(full_kernel_split(p, p, eps).b == doctest::Approx(extrap).epsilon(1e-8));
    auto lb_at = [&](double h) { return limit_kernel_split(p, boundary_point(s, a + h)).b; };
    const double l1 = 2.0 * lb_at(h / 2) - lb_at(h), l2 = 2.0 * lb_at(h / 4) - lb_at(h / 2);
    CHECK(limit_kernel_split(p, p).b == doctest::Approx((4.0 * l2 - l1) / 3.0).epsilon(1e-8));
  }
}

TEST_CASE("limit operator multiplier on the circle") {
  const BoundaryGrid g = build_grid(FourierShape::zero(2), 0.0, 64);
  const KernelSystem k = assemble_limit(g);
  for (int l = 0; l <= 16; ++l) {
    Eigen::VectorXd f(g.n), ref(g.n);
    for (int j = 0; j < g.n; ++j) {
      f[j] = std::cos(l * g.alpha[j]);
      ref[j] = l == 0 ? 0.0 : f[j] / (2.0 * l);
    }
    CHECK((k.k * f - ref).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("capacity of an ellipse") {
  // Equilibrium constant for the log kernel: -(1/2pi) log((a + b) / 2).
  const double ea = 1.1, eb = 1.0 / 1.1;
  auto r = [&](double t) {
    return ea * eb / std::sqrt(eb * eb * std::cos(t) * std::cos(t) + ea * ea * std::sin(t) * std::sin(t)) - 1.0;
  };
  FourierShape s(oracle::cosine_coeffs(r, 64));
  const BoundaryGrid g = build_grid(s, 0.0, 512);
  const CapacitySolution cap = solve_capacity(g);
  CHECK(cap.constant == doctest::Approx(-std::log(0.5 * (ea + eb)) / (2.0 * kPi)).epsilon(1e-9));
  CHECK((g.metric.cwiseProduct(cap.mu)).sum() * g.weight() == doctest::Approx(1.0));
}

TEST_CASE("capacity base case") {
  const BoundaryGrid g = build_grid(FourierShape::zero(2), 0.0, 64);
  const CapacitySolution cap = solve_capacity(g);
  CHECK((cap.mu.array() - 1.0 / (2.0 * kPi)).abs().maxCoeff() <= 1e-12);
  CHECK(std::abs(cap.constant) <= 1e-12);
}

TEST_CASE("w and s are inverse") {
  for (double eps : {0.04, 0.001}) {
    for (double s : {-1.0, 0.0, 2.5}) CHECK(s_from_w(w_from_s(s, eps), eps) == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("outer solution and the stream function inside the core") {
  const FourierShape s = sample_shape();
  const double eps = 0.02, w = 0.7;
  const BoundaryGrid g = build_grid(s, eps, 128);
  const OuterSolution o = solve_outer(assemble_full(g), g, w);
  CHECK(o.boundary_defect < 1e-12);
  CHECK((g.metric.cwiseProduct(o.mu)).sum() * g.weight() == doctest::Approx(1.0).epsilon(1e-13));
  // Inside the core the single layer reproduces gamma + (W/2)(1 + eps x_1)^2.
  std::vector<Eigen::Vector2d> pts{{0.0, 0.0}, {0.3, -0.2}, {-0.5, 0.1}};
  const auto vals = eval_streamfunction(o.mu, g, eps, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x1 = pts[i][0];
    CHECK_FALSE(vals[i].near_boundary);
    CHECK(vals[i].psi == doctest::Approx(o.gamma + 0.5 * w * (1 + eps * x1) * (1 + eps * x1)).epsilon(1e-9));
  }
  // Boundary nodes and the axis are flagged/clamped.
  const auto edge = eval_streamfunction(o.mu, g, eps, {{g.x1[3] * 1.0001, g.x2[3] * 1.0001}, {-1.0 / eps, 0.0}});
  CHECK(edge[0].near_boundary);
  CHECK(edge[1].psi == 0.0);
}

TEST_CASE("affine dependence on W") {
  const FourierShape s = sample_shape();
  const BoundaryGrid g = build_grid(s, 0.01, 64);
  const OuterSolver solver(assemble_full(g), g);
  const OuterSolution a = solver.solve(0.0), b = solver.solve(1.0), c = solver.solve(0.5);
  CHECK(((a.mu + b.mu) / 2 - c.mu).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((a.gamma + b.gamma) / 2 == doctest::Approx(c.gamma));
}

}  // TEST_SUITE
