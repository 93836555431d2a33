#include "thinring/inner.hpp"

#include "thinring/errors.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thinring {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCutLo = 0.5;
constexpr double kCutHi = 0.9;

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

// Chebyshev differentiation on x_k = cos(pi k / n), k = 0..n.
Eigen::MatrixXd cheb_matrix(int n, std::vector<double>& x) {
  x.resize(n + 1);
  for (int k = 0; k <= n; ++k) x[k] = std::cos(kPi * k / n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto c = [n](int k) { return (k == 0 || k == n ? 2.0 : 1.0) * (k % 2 ? -1.0 : 1.0); };
  for (int i = 0; i <= n; ++i) {
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      d(i, j) = c(i) / c(j) / (x[i] - x[j]);
      row += d(i, j);
    }
    d(i, i) = -row;
  }
  return d;
}

// Spectral derivative on an even number of equispaced periodic points.
Eigen::MatrixXd fourier_matrix(int n) {
  const double h = 2.0 * kPi / n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      if (j == l) continue;
      const int k = j - l;
      d(j, l) = 0.5 * ((k % 2) ? -1.0 : 1.0) / std::tan(0.5 * k * h);
    }
  }
  return d;
}

Eigen::MatrixXd fourier_second_matrix(int n) {
  const double h = 2.0 * kPi / n;
  Eigen::MatrixXd d(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const int k = j - l;
      if (k == 0) {
        d(j, l) = -kPi * kPi / (3.0 * h * h) - 1.0 / 6.0;
      } else {
        const double sn = std::sin(0.5 * k * h);
        d(j, l) = -0.5 * ((k % 2) ? -1.0 : 1.0) / (sn * sn);
      }
    }
  }
  return d;
}

struct Extension {
  double value = 0.0;
  double d_r = 0.0;
  double d_beta = 0.0;
};

}  // namespace

ParticularSolution particular_solution(double eps, double x1) {
  const double t = 2.0 + eps * x1;
  return {-0.5 * x1 * x1 * t * t, -2.0 * x1 * t * (1.0 + eps * x1), 0.0};
}

double cutoff(double r) {
  if (r <= kCutLo) return 0.0;
  if (r >= kCutHi) return 1.0;
  const double t = (r - kCutLo) / (kCutHi - kCutLo);
  const double a = bump(t), b = bump(1.0 - t);
  return a / (a + b);
}

double cutoff_derivative(double r) {
  if (r <= kCutLo || r >= kCutHi) return 0.0;
  const double t = (r - kCutLo) / (kCutHi - kCutLo);
  const double a = bump(t), b = bump(1.0 - t);
  const double num = a * b * (1.0 / (t * t) + 1.0 / ((1.0 - t) * (1.0 - t)));
  return num / ((a + b) * (a + b)) / (kCutHi - kCutLo);
}

double InnerSolution::lambda_at(double alpha) const {
  double sum = 0.0;
  for (std::size_t l = 0; l < lambda_cos.size(); ++l) sum += lambda_cos[l] * std::cos(l * alpha);
  return sum;
}

InnerSolution solve_inner(const FourierShape& shape, double eps, const Eigen::VectorXd& alpha,
                          InnerResolution res) {
  const int nr = res.radial;
  int nt = res.angular > 0 ? res.angular : std::max(32, 2 * shape.modes() + 8);
  if (nt % 2) ++nt;
  if (nr < 4) throw std::invalid_argument("solve_inner: need at least 4 radial points");
  const int half = nt / 2;
  const int n_full = nr * nt;
  auto idx = [nt](int i, int j) { return i * nt + j; };

  // Radial grid: positive half of a Chebyshev grid with an even point count,
  // so the origin is never a node (u(-r, b) = u(r, b + pi) folds the rest).
  const int nf = 2 * nr;
  std::vector<double> xc;
  const Eigen::MatrixXd dc = cheb_matrix(nf - 1, xc);
  const Eigen::MatrixXd df = fourier_matrix(nt);

  InnerSolution out;
  out.radial = nr;
  out.angular = nt;
  out.radii.assign(xc.begin(), xc.begin() + nr);
  out.angles.resize(nt);
  for (int j = 0; j < nt; ++j) out.angles[j] = 2.0 * kPi * j / nt;

  std::vector<double> th(nt), dth(nt);
  for (int j = 0; j < nt; ++j) {
    th[j] = shape.value(out.angles[j]);
    dth[j] = shape.d1(out.angles[j]);
  }

  // Interior extension Theta(r, beta) of theta and its polar derivatives.
  std::vector<Extension> ext(static_cast<std::size_t>(nr) * nt);
  for (int i = 0; i < nr; ++i) {
    const double r = out.radii[i];
    for (int j = 0; j < nt; ++j) {
      Extension& e = ext[idx(i, j)];
      if (res.extension == InnerExtension::Cutoff) {
        const double eta = cutoff(r);
        e = {eta * th[j], cutoff_derivative(r) * th[j], eta * dth[j]};
        continue;
      }
      // Harmonic: sum a_l r^l cos(l beta), a polynomial in y.
      double rl = 1.0;
      for (int l = 0; l <= shape.modes(); ++l) {
        const double a = shape.coeffs[l];
        const double cl = std::cos(l * out.angles[j]), sl = std::sin(l * out.angles[j]);
        e.value += a * rl * cl;
        if (l > 0) e.d_r += l * a * (rl / r) * cl;
        e.d_beta -= l * a * rl * sl;
        rl *= r;
      }
    }
  }
  auto extend = [&](int i, int j) { return ext[idx(i, j)]; };

  // Polar derivative matrices on the full grid; radial columns past the
  // origin fold onto the opposite angle.
  const Eigen::MatrixXd dc2 = dc * dc;
  const Eigen::MatrixXd df2 = fourier_second_matrix(nt);
  std::vector<Triplet> tr_r, tr_rr, tr_a, tr_aa;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nf; ++k) {
        const int col = k < nr ? idx(k, j) : idx(nf - 1 - k, (j + half) % nt);
        tr_r.emplace_back(idx(i, j), col, dc(i, k));
        tr_rr.emplace_back(idx(i, j), col, dc2(i, k));
      }
      for (int l = 0; l < nt; ++l) {
        if (l != j) tr_a.emplace_back(idx(i, j), idx(i, l), df(j, l));
        tr_aa.emplace_back(idx(i, j), idx(i, l), df2(j, l));
      }
    }
  }
  Sparse dr(n_full, n_full), drr(n_full, n_full), da(n_full, n_full), daa(n_full, n_full);
  dr.setFromTriplets(tr_r.begin(), tr_r.end());
  drr.setFromTriplets(tr_rr.begin(), tr_rr.end());
  da.setFromTriplets(tr_a.begin(), tr_a.end());
  daa.setFromTriplets(tr_aa.begin(), tr_aa.end());

  Eigen::VectorXd cb(n_full), sb(n_full), rr(n_full);
  Eigen::VectorXd c11(n_full), c12(n_full), c22(n_full);
  Eigen::VectorXd phi_p(n_full);
  for (int i = 0; i < nr; ++i) {
    const double r = out.radii[i];
    for (int j = 0; j < nt; ++j) {
      const int p = idx(i, j);
      const double c = std::cos(out.angles[j]), s = std::sin(out.angles[j]);
      cb[p] = c;
      sb[p] = s;
      rr[p] = r;
      const Extension e = extend(i, j);
      const double big = e.value;
      const double y1 = r * c, y2 = r * s;
      // grad Theta = Theta_r r_hat + (Theta_beta / r) beta_hat.
      const double gb = e.d_beta / r;
      const double g1 = e.d_r * c - gb * s, g2 = e.d_r * s + gb * c;
      const double m11 = 1.0 + big + y1 * g1, m12 = y1 * g2;
      const double m21 = y2 * g1, m22 = 1.0 + big + y2 * g2;
      const double det = m11 * m22 - m12 * m21;
      const double x1 = (1.0 + big) * y1;
      const double axis = 1.0 + eps * x1;
      if (!(det > 0.0) || !(axis > 0.0)) {
        throw GeometryError("solve_inner: interior map is not invertible");
      }
      // C = det / axis * M^{-1} M^{-T}.
      const double i11 = m22 / det, i12 = -m12 / det, i21 = -m21 / det, i22 = m11 / det;
      const double f = det / axis;
      c11[p] = f * (i11 * i11 + i12 * i12);
      c12[p] = f * (i11 * i21 + i12 * i22);
      c22[p] = f * (i21 * i21 + i22 * i22);
      phi_p[p] = particular_solution(eps, x1).value;
    }
  }

  const Eigen::VectorXd inv_r = rr.cwiseInverse();
  const Eigen::VectorXd inv_r2 = inv_r.cwiseProduct(inv_r);
  const Eigen::VectorXd cc = cb.cwiseProduct(cb), ss = sb.cwiseProduct(sb), cs = cb.cwiseProduct(sb);
  const Sparse dy1 = cb.asDiagonal() * dr - Eigen::VectorXd(sb.cwiseProduct(inv_r)).asDiagonal() * da;
  const Sparse dy2 = sb.asDiagonal() * dr + Eigen::VectorXd(cb.cwiseProduct(inv_r)).asDiagonal() * da;
  const Sparse dra = dr * da;

  // Non-divergence form C_ab d_a d_b u + (d_a C_ab) d_b u; true second
  // derivatives avoid the spurious null modes of first-derivative products.
  const Eigen::VectorXd b1 = dy1 * c11 + dy2 * c12;
  const Eigen::VectorXd b2 = dy1 * c12 + dy2 * c22;
  const Eigen::VectorXd k_rr = c11.cwiseProduct(cc) + 2.0 * c12.cwiseProduct(cs) + c22.cwiseProduct(ss);
  const Eigen::VectorXd k_r = (c11.cwiseProduct(ss) - 2.0 * c12.cwiseProduct(cs) + c22.cwiseProduct(cc))
                                  .cwiseProduct(inv_r);
  const Eigen::VectorXd k_aa = k_r.cwiseProduct(inv_r);
  const Eigen::VectorXd k_ra =
      (2.0 * (c22 - c11).cwiseProduct(cs) + 2.0 * c12.cwiseProduct(cc - ss)).cwiseProduct(inv_r);
  const Eigen::VectorXd k_a = -k_ra.cwiseProduct(inv_r);
  const Sparse full = k_rr.asDiagonal() * drr + k_r.asDiagonal() * dr + k_aa.asDiagonal() * daa +
                      k_ra.asDiagonal() * dra + k_a.asDiagonal() * da + b1.asDiagonal() * dy1 +
                      b2.asDiagonal() * dy2;

  // Even (cosine-symmetric) reduction: unknowns at beta_j, j = 0..half.
  const int n_red = nr * (half + 1);
  auto ridx = [half](int i, int j) { return i * (half + 1) + j; };
  std::vector<Triplet> tr_e, tr_s;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int jr = j <= half ? j : nt - j;
      tr_e.emplace_back(idx(i, j), ridx(i, jr), 1.0);
    }
    for (int j = 0; j <= half; ++j) tr_s.emplace_back(ridx(i, j), idx(i, j), 1.0);
  }
  Sparse expand(n_full, n_red), select(n_red, n_full);
  expand.setFromTriplets(tr_e.begin(), tr_e.end());
  select.setFromTriplets(tr_s.begin(), tr_s.end());

  // Solve for the correction to u0 = 1 + y_1^2 - y_2^2, the exact answer for a
  // round flat core; roundoff then scales with the (small) correction.
  Eigen::VectorXd u0(n_full);
  for (int p = 0; p < n_full; ++p) {
    const double y1 = rr[p] * cb[p], y2 = rr[p] * sb[p];
    u0[p] = 1.0 + y1 * y1 - y2 * y2;
  }
  Eigen::MatrixXd op = Eigen::MatrixXd(Sparse(select * full * expand));
  Eigen::VectorXd rhs = -(select * (full * u0));
  for (int j = 0; j <= half; ++j) {
    const int row = ridx(0, j);
    op.row(row).setZero();
    op(row, row) = 1.0;
    rhs[row] = -phi_p[idx(0, j)] - u0[idx(0, j)];
  }
  const Eigen::VectorXd v_red = op.partialPivLu().solve(rhs);
  if (!v_red.allFinite()) throw SolverError("solve_inner: singular collocation system");
  const Eigen::VectorXd u = u0 + expand * v_red;

  out.phi.resize(nr, nt);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) out.phi(i, j) = phi_p[idx(i, j)] + u[idx(i, j)];

  // lambda on r = 1, where Theta = theta.
  const Eigen::VectorXd gy1 = dy1 * u, gy2 = dy2 * u;
  out.lambda_nodes.resize(nt);
  for (int j = 0; j < nt; ++j) {
    const int p = idx(0, j);
    const double c = cb[p], s = sb[p];
    const double r1 = 1.0 + th[j];
    const double d_r = extend(0, j).d_r;
    const double g1 = d_r * c - dth[j] * s, g2 = d_r * s + dth[j] * c;
    const double m11 = r1 + c * g1, m12 = c * g2, m21 = s * g1, m22 = r1 + s * g2;
    const double det = m11 * m22 - m12 * m21;
    // grad_x phi_h = M^{-T} grad_y phi_h.
    const double gx1 = (m22 * gy1[p] - m21 * gy2[p]) / det;
    const double gx2 = (-m12 * gy1[p] + m11 * gy2[p]) / det;
    const double x1 = r1 * c;
    const ParticularSolution ps = particular_solution(eps, x1);
    const double m = std::sqrt(dth[j] * dth[j] + r1 * r1);
    const double n1 = (r1 * c + dth[j] * s) / m, n2 = (r1 * s - dth[j] * c) / m;
    out.lambda_nodes[j] = (n1 * (ps.g1 + gx1) + n2 * (ps.g2 + gx2)) / (1.0 + eps * x1);
  }

  out.lambda_cos.assign(half + 1, 0.0);
  for (int l = 0; l <= half; ++l) {
    double sum = 0.0;
    for (int j = 0; j < nt; ++j) sum += out.lambda_nodes[j] * std::cos(l * out.angles[j]);
    sum *= 2.0 / nt;
    if (l == 0 || l == half) sum *= 0.5;
    out.lambda_cos[l] = sum;
  }
  out.lambda.resize(alpha.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) out.lambda[k] = out.lambda_at(alpha[k]);
  return out;
}

}  // namespace thinring
