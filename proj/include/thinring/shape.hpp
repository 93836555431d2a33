#pragma once

#include <Eigen/Dense>

#include <vector>

// Cosine-series cross sections chi(alpha) = (1 + theta(alpha)) (cos alpha, sin alpha)
// and their sampled boundary geometry.

namespace thinring {

/// theta(alpha) = sum_{l=0}^M a_l cos(l alpha).
struct FourierShape {
  std::vector<double> coeffs;

  FourierShape() = default;
  explicit FourierShape(std::vector<double> a) : coeffs(std::move(a)) {}
  static FourierShape zero(int modes);

  int modes() const { return static_cast<int>(coeffs.size()) - 1; }
  double value(double alpha) const;
  double d1(double alpha) const;
  double d2(double alpha) const;
  /// sup|theta| sampled on a grid much finer than the highest mode.
  double sup_norm() const;
};

/// Geometry of one boundary point, enough to evaluate kernels pointwise.
struct BoundaryPoint {
  double alpha = 0.0;
  double theta = 0.0;
  double dtheta = 0.0;
  double x1 = 0.0;  ///< chi_1 = (1 + theta) cos alpha
  double x2 = 0.0;
  double metric = 1.0;  ///< |chi'|
};

BoundaryPoint boundary_point(const FourierShape& shape, double alpha);

/// Boundary sampled at alpha_j = 2 pi j / n.
struct BoundaryGrid {
  int n = 0;
  double eps = 0.0;
  Eigen::VectorXd alpha, theta, dtheta, d2theta;
  Eigen::VectorXd x1, x2, metric;
  Eigen::VectorXd n1, n2;  ///< outward unit normal
  /// Mean curvature of the blown-up ring surface: planar curvature plus
  /// eps n_1 / (1 + eps chi_1).
  Eigen::VectorXd h;

  BoundaryPoint point(int j) const;
  double weight() const;  ///< trapezoid weight 2 pi / n
};

/// Sample the boundary. Requires n even and n >= 4 M. Throws GeometryError if
/// sup|theta| > 1/2 or the boundary touches the axis (1 + eps chi_1 <= 0).
BoundaryGrid build_grid(const FourierShape& shape, double eps, int n);

/// (1/2) int (1+theta)^2 dalpha, equal to pi on the constraint set.
double area(const FourierShape& shape);
/// (1/3) int (1+theta)^3 cos alpha dalpha, zero on the constraint set.
double moment_x1(const FourierShape& shape);

/// Adjust a_0, a_1 so that area = pi and moment = 0. Throws ProjectionError if
/// the 2x2 Newton iteration does not reach 1e-12.
FourierShape project_constraints(const FourierShape& shape);

/// sqrt(sum_l (1+l)^{2k} a_l^2 ||cos l alpha||^2) with ||1||^2 = 2 pi and
/// ||cos l alpha||^2 = pi otherwise.
double sobolev_norm(const FourierShape& shape, int k);

}  // namespace thinring
