#pragma once

// Complete elliptic integrals and the ring-kernel profile F(s).
//
// F(s) is the profile of the fundamental solution of -div(r^{-1} grad) in the
// meridional half plane,
//
//     F(s) = int_0^pi cos t / sqrt(2(1 - cos t) + s) dt
//          = (2+s)/sqrt(4+s) K(k) - sqrt(4+s) E(k),   k = sqrt(4/(4+s)),
//
// and near s = 0 it splits as F(s) = p(s) + q(s) log s with p, q analytic,
// q(0) = -1/2 and p(0) = log 8 - 2.

namespace thinring::special {

/// Default upper end of the range where the log split is evaluated.
inline constexpr double kDefaultSplitMax = 1.0;

struct EllipticPair {
  double big_k = 0.0;  ///< K(k), first kind
  double big_e = 0.0;  ///< E(k), second kind
  double modulus = 0.0;
};

/// K(k) and E(k) by the arithmetic-geometric mean. Throws std::domain_error
/// unless 0 <= k < 1.
EllipticPair elliptic_ke(double k);

/// Same as elliptic_ke but takes the complementary modulus k' = sqrt(1-k^2)
/// directly, so that k close to 1 keeps full relative accuracy in k'.
EllipticPair elliptic_ke_complementary(double k, double k_prime);

/// F(s) by adaptive Gauss-Kronrod quadrature of the defining integral.
/// Slow; intended as an independent reference. Throws std::domain_error for s <= 0.
double f_direct(double s);

/// F(s) through complete elliptic integrals. Throws std::domain_error for s <= 0.
double f_elliptic(double s);

struct FSplit {
  double p = 0.0;  ///< smooth part
  double q = 0.0;  ///< coefficient of log s

  /// p - log 8 + 2, vanishing at s = 0.
  double f1() const;
  /// q + 1/2, vanishing at s = 0.
  double f2() const;
  /// p + q log s; requires s > 0.
  double recombine(double s) const;
};

/// Series evaluation of the smooth pair (p, q) in powers of k'^2 = s/(4+s).
/// Throws std::domain_error for s < 0 and std::range_error for s > s_max.
FSplit f_split(double s, double s_max = kDefaultSplitMax);

}  // namespace thinring::special
