#pragma once

#include "thinring/shape.hpp"
#include "thinring/special.hpp"

#include <Eigen/Dense>

#include <vector>

// Exterior Stokes-stream-function problem as a boundary integral equation
// with log-singular kernel, discretized by Kress product quadrature.

namespace thinring {

/// Kernel split as a(alpha, alpha~) log(4 sin^2((alpha - alpha~)/2)) + b(alpha, alpha~).
/// Both parts include the arclength factor |chi'(alpha~)|.
struct KernelSplit {
  double a = 0.0;
  double b = 0.0;
};

/// Full kernel m~ s_2 F(s) / (2 pi), s = eps^2 |chi - chi~|^2 / s_2^2,
/// s_2 = sqrt((1 + eps chi_1)(1 + eps chi~_1)). At coincident angles the
/// diagonal limit of b is returned. Throws std::range_error where the log split
/// is unavailable (s > s_max).
KernelSplit full_kernel_split(const BoundaryPoint& y, const BoundaryPoint& yt, double eps,
                              double s_max = special::kDefaultSplitMax);

/// Planar limit -m~ log|chi - chi~| / (2 pi), split the same way.
KernelSplit limit_kernel_split(const BoundaryPoint& y, const BoundaryPoint& yt);

/// Kress weights R_k, k = 0..n-1, for int log(4 sin^2((t - tau)/2)) f(tau) dtau.
Eigen::VectorXd kress_weights(int n);

/// Quadrature matrix of the single-layer operator together with the flux row
/// m_j 2 pi / n that normalizes int mu |chi'| = 1.
struct KernelSystem {
  Eigen::MatrixXd k;
  Eigen::VectorXd flux_row;
  double eps = 0.0;
  bool limit = false;
};

KernelSystem assemble_full(const BoundaryGrid& grid, double s_max = special::kDefaultSplitMax);
KernelSystem assemble_limit(const BoundaryGrid& grid);

struct CapacitySolution {
  Eigen::VectorXd mu;
  double constant = 0.0;
};

/// Equilibrium density of the planar limit: K mu = c on the boundary, int mu |chi'| = 1.
CapacitySolution solve_capacity(const BoundaryGrid& grid);

struct OuterSolution {
  Eigen::VectorXd mu;
  double gamma = 0.0;
  double w = 0.0;
  double s = 0.0;
  double boundary_defect = 0.0;  ///< max |K mu - gamma - (W/2)(1 + eps chi_1)^2|
};

/// Solves K mu - gamma = (W/2)(1 + eps chi_1)^2, int mu |chi'| = 1. The system is
/// factored once; the solution is affine in W so any W costs O(n).
class OuterSolver {
 public:
  OuterSolver(const KernelSystem& system, const BoundaryGrid& grid);
  OuterSolution solve(double w) const;

 private:
  double eps_ = 0.0;
  Eigen::VectorXd mu0_, mu1_;
  double gamma0_ = 0.0, gamma1_ = 0.0;
  double defect_ = 0.0;
};

OuterSolution solve_outer(const KernelSystem& system, const BoundaryGrid& grid, double w);

/// W = (1/4pi)(log 8 - 1/2 + log(1/eps)) + S/2 and its inverse.
double w_from_s(double s, double eps);
double s_from_w(double w, double eps);

struct StreamValue {
  double psi = 0.0;
  bool near_boundary = false;  ///< closer to a node than the node spacing; value unreliable
};

/// psi(x) = sum_j K(x, chi_j) mu_j |chi'_j| 2 pi / n by the plain trapezoid rule.
/// Points on or beyond the symmetry axis (1 + eps x_1 <= 0) get psi = 0.
std::vector<StreamValue> eval_streamfunction(const Eigen::VectorXd& mu, const BoundaryGrid& grid,
                                             double eps,
                                             const std::vector<Eigen::Vector2d>& points);

}  // namespace thinring
