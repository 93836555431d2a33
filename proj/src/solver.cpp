#include "thinring/solver.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>

namespace thinring {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Everything in the residual that depends on the shape but not on (W, nu).
struct ShapeData {
  BoundaryGrid grid;
  std::unique_ptr<OuterSolver> outer;
  Eigen::VectorXd lambda;
};

std::shared_ptr<ShapeData> prepare(const FourierShape& shape, double eps, const ModelParams& params,
                                   const SolverOptions& opt, bool need_lambda) {
  auto d = std::make_shared<ShapeData>();
  d->grid = build_grid(shape, eps, opt.grid);
  d->outer = std::make_unique<OuterSolver>(assemble_full(d->grid, opt.split_max), d->grid);
  if (need_lambda && !params.vanishing_vorticity) {
    d->lambda = solve_inner(shape, eps, d->grid.alpha, opt.inner).lambda;
  } else {
    d->lambda = Eigen::VectorXd::Zero(d->grid.n);
  }
  return d;
}

double sigma_scale(double eps, const ModelParams& params) {
  const double es = eps * params.sigma.value(eps);
  return es > 0.0 ? 1.0 / (1.0 + es) : 1.0;
}

ResidualVector evaluate(const ShapeData& d, const FourierShape& shape, double eps, double w,
                        double nu, const ModelParams& params) {
  const BoundaryGrid& g = d.grid;
  const OuterSolution o = d.outer->solve(w);
  const double es = eps * params.sigma.value(eps);
  ResidualVector r;
  r.scale = sigma_scale(eps, params);
  r.mu = o.mu;
  r.gamma = o.gamma;
  r.lambda = d.lambda;
  r.h = g.h;
  r.pointwise = (params.rho * d.lambda.array().square() - o.mu.array().square() +
                 es * g.h.array() - nu) *
                r.scale;
  if (!r.pointwise.allFinite()) throw DiagnosticsError("residual: non-finite jump residual");
  const int m = shape.modes();
  r.modes.resize(m + 1);
  for (int l = 0; l <= m; ++l) {
    double sum = 0.0;
    for (int j = 0; j < g.n; ++j) sum += r.pointwise[j] * std::cos(l * g.alpha[j]);
    r.modes[l] = (l == 0 ? 1.0 : 2.0) * sum / g.n;
  }
  r.area = area(shape) - kPi;
  r.moment = moment_x1(shape);
  return r;
}

bool needs_lambda(const ModelParams& params) { return params.rho != 0.0; }

SolutionState finish(double eps, const ModelParams& params, const SolverOptions& opt,
                     const FourierShape& shape, double w, double nu) {
  const auto d = prepare(shape, eps, params, opt, true);
  const ResidualVector r = evaluate(*d, shape, eps, w, nu, params);
  SolutionState st;
  st.eps = eps;
  st.shape = shape;
  st.w = w;
  st.nu = nu;
  st.gamma = r.gamma;
  st.s = s_from_w(w, eps);
  st.alpha = d->grid.alpha;
  st.mu = r.mu;
  st.lambda = r.lambda;
  st.h = r.h;
  Diagnostics& dg = st.diag;
  dg.residual_norm = r.modes.cwiseAbs().maxCoeff();
  dg.area_residual = r.area;
  dg.moment_residual = r.moment;
  dg.theta_sup = shape.sup_norm();
  dg.theta_hk = sobolev_norm(shape, opt.window_k);
  dg.window_bound = std::pow(eps, opt.window_ell);
  dg.in_window = dg.theta_hk <= dg.window_bound;
  dg.w_window = std::abs(w) * std::abs(std::log(eps)) * (eps * eps + dg.theta_hk * dg.theta_hk);
  const double es = eps * params.sigma.value(eps);
  if (es > 0.0) {
    dg.omega_eff = 1.0 / es;
    dg.margin = degeneracy_margin(params.rho, *dg.omega_eff);
  }
  return st;
}

void add_warnings(Diagnostics& dg, const SolverOptions& opt) {
  if (dg.jacobian_condition > opt.cond_warn) {
    dg.warnings.push_back("jacobian condition number " + fmt_g(dg.jacobian_condition) +
                          " exceeds " + fmt_g(opt.cond_warn));
  }
  if (dg.margin && dg.margin->margin < opt.margin_warn) {
    dg.warnings.push_back("near-degenerate: margin " + fmt_g(dg.margin->margin) + " at mode " +
                          std::to_string(dg.margin->worst_mode) +
                          "; jacobian condition number " + fmt_g(dg.jacobian_condition));
  }
  if (!dg.in_window) {
    dg.warnings.push_back("shape outside the uniqueness window: |theta|_H" +
                          std::to_string(opt.window_k) + " = " + fmt_g(dg.theta_hk) +
                          " > eps^" + fmt_g(opt.window_ell));
  }
}

}  // namespace

ResidualVector residual(const FourierShape& shape, double eps, double w, double nu,
                        const ModelParams& params, const SolverOptions& options) {
  SolverOptions opt = options;
  opt.modes = shape.modes();
  const auto d = prepare(shape, eps, params, opt, needs_lambda(params));
  return evaluate(*d, shape, eps, w, nu, params);
}

Eigen::VectorXd pack_unknowns(const FourierShape& shape, double w, double nu) {
  const int m = shape.modes();
  Eigen::VectorXd x(m + 1);
  for (int l = 2; l <= m; ++l) x[l - 2] = shape.coeffs[l];
  x[m - 1] = w;
  x[m] = nu;
  return x;
}

FourierShape unpack_shape(const Eigen::VectorXd& x, int modes) {
  FourierShape shape = FourierShape::zero(modes);
  for (int l = 2; l <= modes; ++l) shape.coeffs[l] = x[l - 2];
  return project_constraints(shape);
}

VectorFunction residual_map(double eps, const ModelParams& params, const SolverOptions& options) {
  struct Cache {
    std::mutex lock;
    Eigen::VectorXd key;
    std::shared_ptr<ShapeData> data;
  };
  auto cache = std::make_shared<Cache>();
  const int m = options.modes;
  return [=](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const Eigen::VectorXd key = x.head(m - 1);
    std::shared_ptr<ShapeData> d;
    {
      std::lock_guard g(cache->lock);
      if (cache->data && cache->key.size() == key.size() && cache->key == key) d = cache->data;
    }
    const FourierShape shape = unpack_shape(x, m);
    if (!d) {
      d = prepare(shape, eps, params, options, needs_lambda(params));
      std::lock_guard g(cache->lock);
      cache->key = key;
      cache->data = d;
    }
    return evaluate(*d, shape, eps, x[m - 1], x[m], params).modes;
  };
}

Eigen::MatrixXd jacobian_fd(const VectorFunction& f, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& fx, double rel_step, int threads) {
  if (!(rel_step > 0.0)) throw std::invalid_argument("jacobian_fd: step must be positive");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd j(fx.size(), n);
  // Trailing columns first: with a shape cache they reuse the base geometry.
  detail::parallel_for(n, threads, [&](int i) {
    const int k = n - 1 - i;
    Eigen::VectorXd xp = x;
    const double h = rel_step * (1.0 + std::abs(x[k]));
    xp[k] += h;
    j.col(k) = (f(xp) - fx) / h;
  });
  return j;
}

SolutionState initial_state(double eps, const ModelParams& params, const SolverOptions& options) {
  const Asymptotics a = asymptotic_wgn(eps, params.rho, params.sigma);
  SolutionState st;
  st.eps = eps;
  st.shape = FourierShape::zero(options.modes);
  st.w = a.w;
  st.gamma = a.gamma;
  st.nu = a.nu;
  st.s = s_from_w(a.w, eps);
  return st;
}

SolutionState newton_solve(double eps, const ModelParams& params, const SolutionState& init,
                           const SolverOptions& options) {
  if (!(eps > 0.0)) throw std::invalid_argument("newton_solve: eps must be positive");
  if (!(params.rho >= 0.0)) throw ParameterError("newton_solve: rho must be non-negative");
  SolverOptions opt = options;
  opt.modes = init.shape.modes();
  const int threads = detail::thread_count(opt.threads);
  const VectorFunction f = residual_map(eps, params, opt);

  Eigen::VectorXd x = pack_unknowns(init.shape, init.w, init.nu);
  Eigen::VectorXd fx = f(x);
  double norm = fx.cwiseAbs().maxCoeff();
  Eigen::MatrixXd jac;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  int jac_evals = 0;
  bool fresh = false;
  auto refresh = [&] {
    jac = jacobian_fd(f, x, fx, opt.fd_step, threads);
    lu.compute(jac);
    ++jac_evals;
    fresh = true;
  };

  int iter = 0;
  while (norm > opt.tol) {
    if (iter >= opt.max_iter) {
      throw ConvergenceError("newton_solve: no convergence at eps = " + fmt_g(eps) +
                                 ", residual " + fmt_g(norm),
                             norm, iter);
    }
    if (jac_evals == 0) refresh();
    Eigen::VectorXd dx = -lu.solve(fx);
    double t = 1.0;
    Eigen::VectorXd x_try, f_try;
    double n_try = 0.0;
    for (int halving = 0;; ++halving) {
      x_try = x + t * dx;
      bool ok = true;
      try {
        f_try = f(x_try);
        n_try = f_try.cwiseAbs().maxCoeff();
        ok = std::isfinite(n_try) && n_try < norm;
      } catch (const GeometryError&) {
        ok = false;
      } catch (const ProjectionError&) {
        ok = false;
      }
      if (ok) break;
      if (!fresh) {
        // A stale Jacobian is the likely culprit; rebuild before damping.
        refresh();
        dx = -lu.solve(fx);
        t = 1.0;
        halving = -1;
        continue;
      }
      if (halving >= 8) {
        throw ConvergenceError("newton_solve: line search failed at eps = " + fmt_g(eps) +
                                   ", residual " + fmt_g(norm),
                               norm, iter);
      }
      t *= 0.5;
    }
    ++iter;
    const double ratio = n_try / norm;
    x = x_try;
    fx = f_try;
    norm = n_try;
    fresh = false;
    if (ratio > 0.25 && norm > opt.tol) refresh();
  }
  if (jac_evals == 0) refresh();

  const int m = opt.modes;
  SolutionState st = finish(eps, params, opt, unpack_shape(x, m), x[m - 1], x[m]);
  st.diag.iterations = iter;
  st.diag.jacobian_evaluations = jac_evals;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const Eigen::VectorXd sv = svd.singularValues();
  st.diag.jacobian_condition = sv[sv.size() - 1] > 0.0
                                   ? sv[0] / sv[sv.size() - 1]
                                   : std::numeric_limits<double>::infinity();
  add_warnings(st.diag, opt);
  return st;
}

ContinuationResult continuation(const std::vector<double>& eps_grid, const ModelParams& params,
                                const SolverOptions& options) {
  ContinuationResult out;
  SolutionState guess;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const double eps = eps_grid[i];
    if (i == 0) {
      guess = initial_state(eps, params, options);
    } else {
      // Shift the previous solution along the asymptotic trend.
      const SolutionState& prev = out.states.back();
      const Asymptotics a0 = asymptotic_wgn(prev.eps, params.rho, params.sigma);
      const Asymptotics a1 = asymptotic_wgn(eps, params.rho, params.sigma);
      guess = prev;
      guess.eps = eps;
      guess.w = prev.w + (a1.w - a0.w);
      guess.nu = prev.nu + (a1.nu - a0.nu);
    }
    try {
      out.states.push_back(newton_solve(eps, params, guess, options));
    } catch (const std::exception& e) {
      out.failure = e.what();
      out.failed_eps = eps;
      break;
    }
  }
  return out;
}

DimensionalOutputs redimensionalize(const NondimParams& params, const SolutionState& state,
                                    const PhysicalSetup& setup) {
  return redimensionalize(params, NondimOutputs{state.w, state.gamma, state.nu}, setup);
}

}  // namespace thinring
