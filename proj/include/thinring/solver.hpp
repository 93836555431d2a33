#pragma once

#include "thinring/errors.hpp"
#include "thinring/inner.hpp"
#include "thinring/outer.hpp"
#include "thinring/physics.hpp"
#include "thinring/shape.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

// Newton iteration for steady rings: unknowns (a_2..a_M, W, nu), residual the
// cosine modes 0..M of rho lambda^2 - mu^2 + eps sigma h - nu on the boundary.

namespace thinring {

struct ModelParams {
  double rho = 0.0;
  SigmaLaw sigma;
  /// Core without vorticity: lambda = 0 and the interior solve is skipped.
  bool vanishing_vorticity = false;
};

struct SolverOptions {
  int grid = 256;
  int modes = 32;
  InnerResolution inner{12, 0};
  double tol = 1e-10;
  int max_iter = 25;
  double fd_step = 1e-7;
  double split_max = special::kDefaultSplitMax;
  int threads = 0;  ///< 0: hardware concurrency (capped by THINRING_THREADS)
  double cond_warn = 1e12;
  double margin_warn = 0.05;
  double window_ell = 0.75;
  int window_k = 5;
};

struct ResidualVector {
  Eigen::VectorXd modes;  ///< r_l, l = 0..M
  double area = 0.0;      ///< area - pi
  double moment = 0.0;
  double scale = 1.0;     ///< 1 / (1 + eps sigma), applied to modes and pointwise
  Eigen::VectorXd pointwise;
  Eigen::VectorXd mu, lambda, h;
  double gamma = 0.0;
};

/// Evaluates the jump residual for a given shape (taken as is, not projected).
ResidualVector residual(const FourierShape& shape, double eps, double w, double nu,
                        const ModelParams& params, const SolverOptions& options = {});

struct Diagnostics {
  double residual_norm = 0.0;
  int iterations = 0;
  int jacobian_evaluations = 0;
  double jacobian_condition = 0.0;
  double area_residual = 0.0;
  double moment_residual = 0.0;
  std::optional<double> omega_eff;  ///< 1 / (eps sigma) at this eps
  std::optional<MarginReport> margin;
  double theta_sup = 0.0;
  double theta_hk = 0.0;      ///< Sobolev norm of order window_k
  double window_bound = 0.0;  ///< eps^window_ell
  bool in_window = false;
  double w_window = 0.0;  ///< |W| |log eps| (eps^2 + |theta|_{H^k}^2)
  std::vector<std::string> warnings;
};

struct SolutionState {
  double eps = 0.0;
  FourierShape shape;
  double w = 0.0, gamma = 0.0, nu = 0.0, s = 0.0;
  Eigen::VectorXd alpha, mu, lambda, h;
  Diagnostics diag;
};

/// Newton failed to converge; carries the last residual.
class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : SolverError(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// theta = 0 with W, gamma, nu from the leading-order asymptotics.
SolutionState initial_state(double eps, const ModelParams& params, const SolverOptions& options = {});

SolutionState newton_solve(double eps, const ModelParams& params, const SolutionState& init,
                           const SolverOptions& options = {});

struct ContinuationResult {
  std::vector<SolutionState> states;
  std::optional<std::string> failure;
  double failed_eps = 0.0;
};

/// Warm-started solves along a descending eps grid; stops at the first failure.
ContinuationResult continuation(const std::vector<double>& eps_grid, const ModelParams& params,
                                const SolverOptions& options = {});

using VectorFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Forward differences with step rel_step (1 + |x_k|); column k evaluated independently.
Eigen::MatrixXd jacobian_fd(const VectorFunction& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& fx, double rel_step, int threads = 1);

/// Unknown vector (a_2..a_M, W, nu) and back.
Eigen::VectorXd pack_unknowns(const FourierShape& shape, double w, double nu);
/// Rebuilds the shape with a_0, a_1 from the constraint projection.
FourierShape unpack_shape(const Eigen::VectorXd& x, int modes);

/// The Newton residual map x -> r (modes 0..M) at fixed eps.
VectorFunction residual_map(double eps, const ModelParams& params, const SolverOptions& options);

/// Same quantities from the stored state, redimensionalized.
DimensionalOutputs redimensionalize(const NondimParams& params, const SolutionState& state,
                                    const PhysicalSetup& setup);

}  // namespace thinring
