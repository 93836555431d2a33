#include "oracles.hpp"
#include "thinring/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace thinring;
using oracle::kPi;

namespace {

SolverOptions small_options() {
  SolverOptions o;
  o.modes = 12;
  o.grid = 64;
  o.inner = {10, 0};
  return o;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("jacobian_fd on a linear map is exact") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 2, -3, 4, 0.5, 0;
  const VectorFunction f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
  const Eigen::VectorXd x = Eigen::Vector2d(0.3, -1.0);
  CHECK((jacobian_fd(f, x, f(x), 1e-6, 2) - a).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(jacobian_fd(f, x, f(x), 0.0), std::invalid_argument);
}

TEST_CASE("jacobian_fd against central differences") {
  const ModelParams p{0.0, SigmaLaw::c_over_eps(4.0)};
  const SolverOptions o = small_options();
  const double eps = 0.02;
  const VectorFunction f = residual_map(eps, p, o);
  const SolutionState init = initial_state(eps, p, o);
  Eigen::VectorXd x = pack_unknowns(init.shape, init.w, init.nu);
  x[0] = 1e-3;
  const Eigen::MatrixXd j = jacobian_fd(f, x, f(x), 1e-7);
  for (int k : {0, 3, 11, 12}) {
    const double h = 1e-5 * (1 + std::abs(x[k]));
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Eigen::VectorXd central = (f(xp) - f(xm)) / (2 * h);
    CHECK((j.col(k) - central).cwiseAbs().maxCoeff() < 1e-5 * (1 + central.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("nu only shifts the constant mode") {
  const ModelParams p{0.5, SigmaLaw::c_over_eps(2.0)};
  const SolverOptions o = small_options();
  const FourierShape s = project_constraints(FourierShape({0, 0, 0.01, 0.003, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  const ResidualVector a = residual(s, 0.02, 0.6, 0.1, p, o);
  const ResidualVector b = residual(s, 0.02, 0.6, 0.35, p, o);
  CHECK(b.modes[0] - a.modes[0] == doctest::Approx(-0.25 * a.scale));
  CHECK((b.modes.tail(12) - a.modes.tail(12)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(a.scale == doctest::Approx(1.0 / 3.0));  // eps sigma = c = 2
  CHECK(std::abs(a.area) < 1e-12);
}

TEST_CASE("asymptotic state has a small residual") {
  // Modes >= 2 and mode 0 shrink like eps (mode 1 is absorbed by W).
  const ModelParams p{0.2, SigmaLaw::none()};
  const SolverOptions o = small_options();
  double prev = 1e300;
  for (double eps : {0.02, 0.01, 0.005}) {
    const SolutionState st = initial_state(eps, p, o);
    const ResidualVector r = residual(st.shape, eps, w_from_s(2 * kPi * p.rho, eps), st.nu, p, o);
    double worst = std::abs(r.modes[0]);
    for (int l = 2; l <= 12; ++l) worst = std::max(worst, std::abs(r.modes[l]));
    CHECK(worst < prev * 0.7);
    prev = worst;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("perturbing a mode keeps the residual even") {
  const ModelParams p{0.1, SigmaLaw::c_over_eps(3.0)};
  const SolverOptions o = small_options();
  FourierShape s = FourierShape::zero(12);
  s.coeffs[4] = 0.01;
  s = project_constraints(s);
  const ResidualVector r = residual(s, 0.01, 0.5, 0.2, p, o);
  const int n = static_cast<int>(r.pointwise.size());
  for (int j = 1; j < n; ++j) CHECK(std::abs(r.pointwise[j] - r.pointwise[n - j]) < 1e-12);
}

TEST_CASE("hollow ring converges and passes the refinement check") {
  const ModelParams p{0.0, SigmaLaw::none()};
  SolverOptions o;
  o.modes = 16;
  o.grid = 128;
  const double eps = 0.01;
  const SolutionState st = newton_solve(eps, p, initial_state(eps, p, o), o);
  CHECK(st.diag.residual_norm <= o.tol);
  CHECK(std::abs(st.diag.area_residual) <= 1e-12);
  CHECK(std::abs(st.diag.moment_residual) <= 1e-12);
  CHECK(st.s == doctest::Approx(s_from_w(st.w, eps)));
  CHECK(std::abs(st.w - asymptotic_wgn(eps, 0.0, p.sigma).w) < 1e-3);
  // Same state on a doubled grid.
  SolverOptions fine = o;
  fine.grid = 256;
  const ResidualVector r = residual(st.shape, eps, st.w, st.nu, p, fine);
  CHECK(r.modes.cwiseAbs().maxCoeff() < 10 * o.tol);
  // Converged fields are even.
  const int n = static_cast<int>(st.mu.size());
  for (int j = 1; j < n; ++j) {
    CHECK(std::abs(st.mu[j] - st.mu[n - j]) < 1e-12);
    CHECK(std::abs(st.h[j] - st.h[n - j]) < 1e-12);
  }
}

TEST_CASE("continuation matches cold starts") {
  const ModelParams p{0.0, SigmaLaw::c_over_eps(4.0)};
  SolverOptions o = small_options();
  o.modes = 16;
  o.grid = 128;
  const std::vector<double> grid{0.04, 0.02, 0.01};
  const ContinuationResult res = continuation(grid, p, o);
  REQUIRE_FALSE(res.failure.has_value());
  REQUIRE(res.states.size() == 3);
  double prev = 1e300;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SolutionState cold = newton_solve(grid[i], p, initial_state(grid[i], p, o), o);
    CHECK(std::abs(cold.w - res.states[i].w) < 1e-9);
    CHECK(std::abs(cold.nu - res.states[i].nu) < 1e-9);
    const double ratio = res.states[i].diag.theta_sup / grid[i];
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("non-convergence carries the residual") {
  const ModelParams p{0.0, SigmaLaw::c_over_eps(4.0)};
  SolverOptions o = small_options();
  o.max_iter = 1;
  o.tol = 1e-15;
  try {
    newton_solve(0.02, p, initial_state(0.02, p, o), o);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 0.0);
    CHECK(e.iterations() >= 1);
  }
}

TEST_CASE("vanishing vorticity flag") {
  const ModelParams p{1.0, SigmaLaw::none(), true};
  const SolverOptions o = small_options();
  const SolutionState st = initial_state(0.01, p, o);
  const ResidualVector r = residual(st.shape, 0.01, st.w, st.nu, p, o);
  CHECK(r.lambda.cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
