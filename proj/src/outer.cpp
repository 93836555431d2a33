#include "thinring/outer.hpp"

#include "thinring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace thinring {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog8 = std::log(8.0);

double sin2_4(double delta) {
  const double s = std::sin(0.5 * delta);
  return 4.0 * s * s;
}

// |chi - chi~|^2 / (4 sin^2(delta/2)), written so it stays accurate as delta -> 0:
// (1+t)(1+t~) + (t - t~)^2 / S4.
double distance_ratio(const BoundaryPoint& y, const BoundaryPoint& yt, double s4) {
  const double dt = y.theta - yt.theta;
  return (1.0 + y.theta) * (1.0 + yt.theta) + dt * dt / s4;
}

bool same_angle(const BoundaryPoint& y, const BoundaryPoint& yt) {
  const double d = std::remainder(y.alpha - yt.alpha, 2.0 * kPi);
  return std::abs(d) < 1e-300;
}

}  // namespace

KernelSplit full_kernel_split(const BoundaryPoint& y, const BoundaryPoint& yt, double eps,
                              double s_max) {
  KernelSplit out;
  const double mt = yt.metric;
  if (same_angle(y, yt)) {
    const double s2 = 1.0 + eps * y.x1;
    out.a = -mt * s2 / (4.0 * kPi);
    out.b = mt * s2 / (2.0 * kPi) * (std::log(s2 / (eps * mt)) + kLog8 - 2.0);
    return out;
  }
  const double s4 = sin2_4(y.alpha - yt.alpha);
  const double ratio = distance_ratio(y, yt, s4);
  const double s2 = std::sqrt((1.0 + eps * y.x1) * (1.0 + eps * yt.x1));
  const double s = eps * eps * s4 * ratio / (s2 * s2);
  const special::FSplit f = special::f_split(s, s_max);
  const double scale = mt * s2 / (2.0 * kPi);
  out.a = scale * f.q;
  out.b = scale * (f.p + f.q * (2.0 * std::log(eps) + std::log(ratio) - 2.0 * std::log(s2)));
  return out;
}

KernelSplit limit_kernel_split(const BoundaryPoint& y, const BoundaryPoint& yt) {
  KernelSplit out;
  const double mt = yt.metric;
  out.a = -mt / (4.0 * kPi);
  if (same_angle(y, yt)) {
    out.b = -mt / (2.0 * kPi) * std::log(mt);
  } else {
    out.b = -mt / (4.0 * kPi) * std::log(distance_ratio(y, yt, sin2_4(y.alpha - yt.alpha)));
  }
  return out;
}

Eigen::VectorXd kress_weights(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("kress_weights: n must be even");
  const int half = n / 2;
  Eigen::VectorXd r(n);
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int m = 1; m < half; ++m) sum += std::cos(2.0 * kPi * m * k / n) / m;
    r[k] = -4.0 * kPi / n * sum - 4.0 * kPi / (static_cast<double>(n) * n) * std::cos(kPi * k);
  }
  return r;
}

namespace {

template <class SplitFn>
KernelSystem assemble(const BoundaryGrid& grid, SplitFn&& split) {
  const int n = grid.n;
  const Eigen::VectorXd r = kress_weights(n);
  const double w = grid.weight();
  KernelSystem sys;
  sys.eps = grid.eps;
  sys.k.resize(n, n);
  sys.flux_row = grid.metric * w;
  std::vector<BoundaryPoint> pts(n);
  for (int j = 0; j < n; ++j) pts[j] = grid.point(j);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = ((i - j) % n + n) % n;
      const KernelSplit ab = split(pts[i], pts[j], k);
      sys.k(i, j) = ab.a * r[k] + ab.b * w;
    }
  }
  return sys;
}

}  // namespace

KernelSystem assemble_full(const BoundaryGrid& grid, double s_max) {
  const double eps = grid.eps;
  if (!(eps > 0.0)) throw std::invalid_argument("assemble_full: eps must be positive");
  const int n = grid.n;
  auto split = [&](const BoundaryPoint& y, const BoundaryPoint& yt, int k) {
    try {
      return full_kernel_split(y, yt, eps, s_max);
    } catch (const std::range_error&) {
      // Far from the diagonal the kernel is smooth; the trapezoid rule suffices.
      if (k <= 1 || k >= n - 1) {
        throw SolverError("assemble_full: log split unavailable next to the diagonal");
      }
      const double s4 = sin2_4(y.alpha - yt.alpha);
      const double s2 = std::sqrt((1.0 + eps * y.x1) * (1.0 + eps * yt.x1));
      const double s = eps * eps * s4 * distance_ratio(y, yt, s4) / (s2 * s2);
      return KernelSplit{0.0, yt.metric * s2 * special::f_elliptic(s) / (2.0 * kPi)};
    }
  };
  KernelSystem sys = assemble(grid, split);
  sys.limit = false;
  return sys;
}

KernelSystem assemble_limit(const BoundaryGrid& grid) {
  auto split = [](const BoundaryPoint& y, const BoundaryPoint& yt, int) {
    return limit_kernel_split(y, yt);
  };
  KernelSystem sys = assemble(grid, split);
  sys.limit = true;
  sys.eps = 0.0;
  return sys;
}

namespace {

Eigen::MatrixXd bordered(const KernelSystem& sys) {
  const int n = static_cast<int>(sys.k.rows());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  a.topLeftCorner(n, n) = sys.k;
  a.col(n).head(n).setConstant(-1.0);
  a.row(n).head(n) = sys.flux_row.transpose();
  return a;
}

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw SolverError(std::string(what) + ": singular bordered system");
}

}  // namespace

CapacitySolution solve_capacity(const BoundaryGrid& grid) {
  const KernelSystem sys = assemble_limit(grid);
  const int n = grid.n;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  const Eigen::VectorXd x = bordered(sys).partialPivLu().solve(rhs);
  check_finite(x, "solve_capacity");
  return {x.head(n), x[n]};
}

OuterSolver::OuterSolver(const KernelSystem& system, const BoundaryGrid& grid) : eps_(grid.eps) {
  const int n = grid.n;
  if (system.k.rows() != n) throw std::invalid_argument("OuterSolver: size mismatch");
  const Eigen::MatrixXd a = bordered(system);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + 1, 2);
  rhs(n, 0) = 1.0;
  for (int j = 0; j < n; ++j) {
    const double r = 1.0 + eps_ * grid.x1[j];
    rhs(j, 1) = 0.5 * r * r;
  }
  const Eigen::MatrixXd x = a.partialPivLu().solve(rhs);
  if (!x.allFinite()) throw SolverError("OuterSolver: singular bordered system");
  mu0_ = x.col(0).head(n);
  mu1_ = x.col(1).head(n);
  gamma0_ = x(n, 0);
  gamma1_ = x(n, 1);
  const Eigen::MatrixXd defect = a * x - rhs;
  defect_ = defect.cwiseAbs().maxCoeff();
}

OuterSolution OuterSolver::solve(double w) const {
  OuterSolution out;
  out.mu = mu0_ + w * mu1_;
  out.gamma = gamma0_ + w * gamma1_;
  out.w = w;
  out.s = eps_ > 0.0 ? s_from_w(w, eps_) : std::numeric_limits<double>::quiet_NaN();
  out.boundary_defect = defect_ * (1.0 + std::abs(w));
  return out;
}

OuterSolution solve_outer(const KernelSystem& system, const BoundaryGrid& grid, double w) {
  return OuterSolver(system, grid).solve(w);
}

double w_from_s(double s, double eps) {
  return (kLog8 - 0.5 + std::log(1.0 / eps)) / (4.0 * kPi) + 0.5 * s;
}

double s_from_w(double w, double eps) {
  return 2.0 * (w - (kLog8 - 0.5 + std::log(1.0 / eps)) / (4.0 * kPi));
}

std::vector<StreamValue> eval_streamfunction(const Eigen::VectorXd& mu, const BoundaryGrid& grid,
                                             double eps,
                                             const std::vector<Eigen::Vector2d>& points) {
  const int n = grid.n;
  if (mu.size() != n) throw std::invalid_argument("eval_streamfunction: size mismatch");
  const double w = grid.weight();
  double spacing = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) spacing = std::min(spacing, grid.metric[j] * w);

  std::vector<StreamValue> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Eigen::Vector2d& x = points[p];
    const double axis = 1.0 + eps * x[0];
    if (axis <= 1e-12) continue;
    double sum = 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double d1 = x[0] - grid.x1[j], d2 = x[1] - grid.x2[j];
      const double dist2 = d1 * d1 + d2 * d2;
      nearest = std::min(nearest, dist2);
      const double s2 = std::sqrt(axis * (1.0 + eps * grid.x1[j]));
      const double s = eps * eps * dist2 / (s2 * s2);
      if (!(s > 0.0)) {
        sum = std::numeric_limits<double>::quiet_NaN();
        break;
      }
      const double f = s <= special::kDefaultSplitMax
                           ? special::f_split(s).recombine(s)
                           : special::f_elliptic(s);
      sum += s2 * f / (2.0 * kPi) * mu[j] * grid.metric[j] * w;
    }
    out[p].psi = sum;
    out[p].near_boundary = std::sqrt(nearest) < spacing;
  }
  return out;
}

}  // namespace thinring
