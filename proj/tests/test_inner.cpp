#include "oracles.hpp"
#include "thinring/errors.hpp"
#include "thinring/inner.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinring;
using oracle::kPi;

namespace {

Eigen::VectorXd angles(int n) {
  Eigen::VectorXd a(n);
  for (int j = 0; j < n; ++j) a[j] = 2.0 * kPi * j / n;
  return a;
}

}  // namespace

TEST_SUITE("inner") {

TEST_CASE("particular solution") {
  for (double eps : {0.0, 0.1}) {
    for (auto [x1, x2] : {std::pair{0.3, 0.4}, std::pair{-0.7, 0.1}}) {
      auto u = [eps](double a, double) { return particular_solution(eps, a).value; };
      CHECK(oracle::apply_operator(u, eps, x1, x2) == doctest::Approx(4.0 * (1.0 + eps * x1)).epsilon(1e-6));
      const double h = 1e-6;
      CHECK(particular_solution(eps, x1).g1 ==
            doctest::Approx((u(x1 + h, 0) - u(x1 - h, 0)) / (2 * h)).epsilon(1e-8));
    }
  }
  const ParticularSolution o = particular_solution(0.1, 0.0);
  CHECK(o.value == 0.0);
  CHECK(o.g1 == 0.0);
  CHECK(particular_solution(0.0, 0.5).value == doctest::Approx(-0.5));
}

TEST_CASE("cutoff") {
  CHECK(cutoff(0.3) == 0.0);
  CHECK(cutoff(0.5) == 0.0);
  CHECK(cutoff(0.95) == 1.0);
  CHECK(cutoff(1.0) == 1.0);
  const double h = 1e-6;
  for (double r : {0.6, 0.7, 0.85}) {
    CHECK(cutoff_derivative(r) == doctest::Approx((cutoff(r + h) - cutoff(r - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("round flat core") {
  const InnerSolution s = solve_inner(FourierShape::zero(8), 0.0, angles(16));
  CHECK((s.lambda.array() + 2.0).abs().maxCoeff() <= 1e-8);
  // phi = 1 - |x|^2 on the collocation nodes.
  for (int i = 0; i < s.radial; ++i) {
    for (int j = 0; j < s.angular; j += 7) {
      CHECK(s.phi(i, j) == doctest::Approx(1.0 - s.radii[i] * s.radii[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("eps derivative") {
  const Eigen::VectorXd a = angles(16);
  const double eps = 1e-3;
  const InnerSolution s0 = solve_inner(FourierShape::zero(8), 0.0, a);
  const InnerSolution s1 = solve_inner(FourierShape::zero(8), eps, a);
  for (int j = 0; j < a.size(); ++j) {
    CHECK(std::abs((s1.lambda[j] - s0.lambda[j]) / eps + 0.5 * std::cos(a[j])) <= 1e-3);
  }
  // Interior derivative field (5/4)(r - r^3) cos(beta).
  for (int i = 0; i < s0.radial; ++i) {
    for (int j = 0; j < s0.angular; j += 5) {
      const double r = s0.radii[i], b = s0.angles[j];
      const double d = (s1.phi(i, j) - s0.phi(i, j)) / eps;
      CHECK(std::abs(d - 1.25 * (r - r * r * r) * std::cos(b)) <= 2e-3);
    }
  }
}

TEST_CASE("shape derivative follows the Dirichlet-to-Neumann symbol") {
  const Eigen::VectorXd a = angles(24);
  const double delta = 1e-5;
  const InnerSolution s0 = solve_inner(FourierShape::zero(8), 0.0, a);
  for (int l : {2, 3, 5}) {
    FourierShape sh = FourierShape::zero(8);
    sh.coeffs[l] = delta;
    const InnerSolution s = solve_inner(sh, 0.0, a);
    // 2 |l| cos(l a) - 2 cos(l a).
    for (int j = 0; j < a.size(); ++j) {
      CHECK(std::abs((s.lambda[j] - s0.lambda[j]) / delta - (2.0 * l - 2.0) * std::cos(l * a[j])) <= 1e-3);
    }
  }
}

TEST_CASE("cutoff extension agrees at higher resolution") {
  FourierShape sh = project_constraints(FourierShape({0.0, 0.0, 0.01, 0.004}));
  const Eigen::VectorXd a = angles(12);
  const InnerSolution h = solve_inner(sh, 0.02, a);
  InnerResolution res{40, 0, InnerExtension::Cutoff};
  const InnerSolution c = solve_inner(sh, 0.02, a, res);
  CHECK((h.lambda - c.lambda).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("evenness, flux identity and positivity") {
  FourierShape sh = project_constraints(FourierShape({0.0, 0.0, 0.03, -0.01, 0.005}));
  const double eps = 0.03;
  const int n = 64;
  const Eigen::VectorXd a = angles(n);
  const InnerSolution s = solve_inner(sh, eps, a);
  for (int j = 1; j < n; ++j) CHECK(std::abs(s.lambda[j] - s.lambda[n - j]) < 1e-12);
  // int lambda |chi'| = -int 4 (1 + eps x_1) dx = -4 pi on constrained shapes.
  double flux = 0.0;
  for (int j = 0; j < n; ++j) flux += s.lambda[j] * std::hypot(sh.d1(a[j]), 1.0 + sh.value(a[j]));
  flux *= 2.0 * kPi / n;
  CHECK(flux == doctest::Approx(-4.0 * kPi).epsilon(1e-9));
  for (int i = 1; i < s.radial; ++i)
    for (int j = 0; j < s.angular; ++j) CHECK(s.phi(i, j) > 0.0);
}

TEST_CASE("refinement") {
  FourierShape sh = project_constraints(FourierShape({0.0, 0.0, 0.05, 0.02}));
  const Eigen::VectorXd a = angles(8);
  const InnerSolution lo = solve_inner(sh, 0.04, a, {8, 24});
  const InnerSolution mid = solve_inner(sh, 0.04, a, {12, 32});
  const InnerSolution hi = solve_inner(sh, 0.04, a, {20, 48});
  const double e1 = (lo.lambda - hi.lambda).cwiseAbs().maxCoeff();
  const double e2 = (mid.lambda - hi.lambda).cwiseAbs().maxCoeff();
  CHECK(e2 <= e1);
  CHECK(e2 < 5e-8);
}

TEST_CASE("non-invertible map") {
  FourierShape bad = FourierShape::zero(12);
  bad.coeffs[12] = 0.2;  // (1 + l) |a_l| > 1
  CHECK_THROWS_AS(solve_inner(bad, 0.0, angles(8)), GeometryError);
}

}  // TEST_SUITE
