#include "thinring/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace thinring::special {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog8 = std::log(8.0);

}  // namespace

EllipticPair elliptic_ke_complementary(double k, double k_prime) {
  if (!(k >= 0.0) || !(k < 1.0) || !(k_prime > 0.0)) {
    throw std::domain_error("elliptic_ke: modulus must satisfy 0 <= k < 1");
  }
  // Gauss transform: a_{n+1} = (a_n + b_n)/2, b_{n+1} = sqrt(a_n b_n),
  // c_{n+1} = (a_n - b_n)/2, and E = K (1 - sum 2^{n-1} c_n^2).
  double a = 1.0;
  double b = k_prime;
  double c = k;
  double power = 0.5;
  double sum = power * c * c;
  for (int it = 0; it < 64; ++it) {
    const double a_next = 0.5 * (a + b);
    const double b_next = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = a_next;
    b = b_next;
    power *= 2.0;
    sum += power * c * c;
    if (std::abs(c) <= 1e-17 * a) break;
  }
  EllipticPair out;
  out.modulus = k;
  out.big_k = kPi / (2.0 * a);
  out.big_e = out.big_k * (1.0 - sum);
  return out;
}

EllipticPair elliptic_ke(double k) {
  if (!(k >= 0.0) || !(k < 1.0)) {
    throw std::domain_error("elliptic_ke: modulus must satisfy 0 <= k < 1");
  }
  return elliptic_ke_complementary(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

double f_direct(double s) {
  if (!(s > 0.0)) throw std::domain_error("f_direct: s must be positive");
  auto integrand = [s](double t) {
    const double half = std::sin(0.5 * t);
    return std::cos(t) / std::sqrt(4.0 * half * half + s);
  };
  // The integrand has a peak of width sqrt(s) at t = 0; split geometrically.
  std::vector<double> breaks{0.0};
  for (double b = std::sqrt(s); b < kPi; b *= 8.0) breaks.push_back(b);
  breaks.push_back(kPi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, breaks[i], breaks[i + 1], 12, 1e-13, &err);
  }
  return total;
}

double f_elliptic(double s) {
  if (!(s > 0.0)) throw std::domain_error("f_elliptic: s must be positive");
  const double root = std::sqrt(4.0 + s);
  const double k = 2.0 / root;
  const double k_prime = std::sqrt(s) / root;
  const EllipticPair ke = elliptic_ke_complementary(k, k_prime);
  return (2.0 + s) / root * ke.big_k - root * ke.big_e;
}

double FSplit::f1() const { return p - kLog8 + 2.0; }
double FSplit::f2() const { return q + 0.5; }
double FSplit::recombine(double s) const { return p + q * std::log(s); }

FSplit f_split(double s, double s_max) {
  if (!(s >= 0.0)) throw std::domain_error("f_split: s must be non-negative");
  if (s > s_max) throw std::range_error("f_split: s outside the series range");

  // Expansions about k' = 0 in x = k'^2 with L = log(1/k'):
  //   K = sum a_m x^m (L + d_m)
  //   E = 1 + 1/2 sum b_m x^{m+1} (L + d_m - 1/((2m+1)(2m+2)))
  // with d_m = psi(1+m) - psi(1/2+m).
  const double x = s / (4.0 + s);
  double a = 1.0;
  double b = 0.5;  // (1/2)_0 (3/2)_0 / ((2)_0 0!) = 1, times 1/2 folded in
  double d = 2.0 * std::log(2.0);
  double xm = 1.0;
  double k_log = 0.0, k_const = 0.0;
  double e_log = 0.0, e_const = 0.0;
  for (int m = 0; m < 400; ++m) {
    const double tk = a * xm;
    const double te = b * xm * x;
    k_log += tk;
    k_const += tk * d;
    e_log += te;
    e_const += te * (d - 1.0 / ((2.0 * m + 1.0) * (2.0 * m + 2.0)));
    if (tk < 1e-17 * k_log && m > 0) break;
    const double mm = m;
    a *= ((mm + 0.5) / (mm + 1.0)) * ((mm + 0.5) / (mm + 1.0));
    b *= (mm + 0.5) * (mm + 1.5) / ((mm + 2.0) * (mm + 1.0));
    d -= 1.0 / ((mm + 1.0) * (2.0 * mm + 1.0));
    xm *= x;
  }
  // L = log(1/k') = (1/2) log(4+s) - (1/2) log s.
  const double half_log = 0.5 * std::log(4.0 + s);
  const double root = std::sqrt(4.0 + s);
  const double c_k = (2.0 + s) / root;
  const double c_e = root;
  FSplit out;
  out.q = -0.5 * (c_k * k_log - c_e * e_log);
  out.p = c_k * (k_log * half_log + k_const) - c_e * (1.0 + e_log * half_log + e_const);
  return out;
}

}  // namespace thinring::special
