#pragma once

#include "thinring/shape.hpp"

#include <Eigen/Dense>

#include <vector>

// Interior stream function: -div((1 + eps x_1)^{-1} grad phi) = 4 (1 + eps x_1)
// in the cross section, phi = 0 on its boundary, and the scaled normal derivative
// lambda = n . grad phi / (1 + eps x_1) on the boundary.
//
// phi = phi_p + phi_h with an explicit particular part; phi_h is pulled back to
// the unit disk through x = (1 + eta(|y|) theta(arg y)) y and solved there with a
// Chebyshev (radial) x Fourier (angular) collocation scheme.

namespace thinring {

/// How theta is extended into the disk.
enum class InnerExtension {
  Harmonic,  ///< sum a_l r^l cos(l beta); polynomial in y, resolved exactly
  Cutoff,    ///< eta(r) theta(beta) with a C-infinity cutoff; converges slowly in r
};

struct InnerResolution {
  int radial = 16;   ///< Chebyshev points in (0, 1]
  int angular = 0;   ///< even; 0 picks max(32, 2M + 8)
  InnerExtension extension = InnerExtension::Harmonic;
};

struct ParticularSolution {
  double value = 0.0;
  double g1 = 0.0;  ///< d/dx_1
  double g2 = 0.0;
};

/// phi_p = -(x_1^2 / 2)(2 + eps x_1)^2.
ParticularSolution particular_solution(double eps, double x1);

/// Smooth cutoff: 0 on [0, 1/2], 1 on [9/10, 1].
double cutoff(double r);
double cutoff_derivative(double r);

struct InnerSolution {
  int radial = 0;
  int angular = 0;
  std::vector<double> radii;   ///< r_i, i = 0 is the boundary r = 1
  std::vector<double> angles;  ///< beta_j = 2 pi j / angular
  Eigen::MatrixXd phi;         ///< phi at (x = X(r_i, beta_j)), radial x angular
  Eigen::VectorXd lambda_nodes;  ///< lambda at beta_j on r = 1
  std::vector<double> lambda_cos;  ///< cosine coefficients of lambda
  Eigen::VectorXd lambda;      ///< lambda at the target angles

  double lambda_at(double alpha) const;
};

/// Solves the interior problem and evaluates lambda at the given angles.
/// Throws GeometryError if the pulled-back map degenerates.
InnerSolution solve_inner(const FourierShape& shape, double eps, const Eigen::VectorXd& alpha,
                          InnerResolution res = {});

}  // namespace thinring
