#include "thinring/physics.hpp"

#include "thinring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace thinring {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog8 = std::log(8.0);

}  // namespace

SigmaLaw SigmaLaw::c_power(double c, double p) {
  if (!(p > 1.0 && p < 2.0)) throw ParameterError("c_power: exponent must lie in (1, 2)");
  return {Kind::CPower, c, p};
}

SigmaLaw SigmaLaw::from_name(const std::string& kind, double c, double p) {
  if (kind == "none") return none();
  if (kind == "c_over_eps") return c_over_eps(c);
  if (kind == "c_log_over_eps") return c_log_over_eps(c);
  if (kind == "c_power") return c_power(c, p);
  throw ParameterError("unknown sigma kind '" + kind + "'");
}

double SigmaLaw::value(double eps) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::COverEps: return c / eps;
    case Kind::CLogOverEps: return c * std::abs(std::log(eps)) / eps;
    case Kind::CPower: return c / std::pow(eps, p);
  }
  return 0.0;
}

double SigmaLaw::derivative(double eps) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::COverEps: return -c / (eps * eps);
    case Kind::CLogOverEps: {
      const double l = std::log(eps);
      const double sign = l < 0.0 ? -1.0 : 1.0;
      return c * (sign - std::abs(l)) / (eps * eps);
    }
    case Kind::CPower: return -p * c / std::pow(eps, p + 1.0);
  }
  return 0.0;
}

std::optional<double> SigmaLaw::omega() const {
  if (is_zero()) return std::nullopt;
  if (kind == Kind::COverEps) return 1.0 / c;
  return 0.0;
}

SigmaLaw SigmaLaw::scaled(double factor) const {
  SigmaLaw out = *this;
  out.c *= factor;
  return out;
}

std::string SigmaLaw::name() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::COverEps: return "c_over_eps";
    case Kind::CLogOverEps: return "c_log_over_eps";
    case Kind::CPower: return "c_power";
  }
  return "none";
}

NondimParams nondimensionalize(const PhysicalSetup& setup) {
  if (setup.b_bar == 0.0) throw ParameterError("nondimensionalize: zero circulation");
  if (!(setup.rho_out > 0.0)) throw ParameterError("nondimensionalize: rho_out must be positive");
  if (!(setup.rho_in >= 0.0) || setup.rho_in > setup.rho_out)
    throw ParameterError("nondimensionalize: need 0 <= rho_in <= rho_out");
  if (!(setup.ring_radius > 0.0) || !(setup.eps_bar > 0.0))
    throw ParameterError("nondimensionalize: R and eps_bar must be positive");
  NondimParams out;
  const double r = setup.ring_radius;
  out.eps = setup.eps_bar / r;
  out.a = kPi * r * r * setup.eps_bar * setup.eps_bar * setup.xi_bar;
  out.b = r * setup.b_bar;
  const double ab = out.a / out.b;
  out.rho = ab * ab * (setup.rho_in / setup.rho_out) / (16.0 * kPi * kPi);
  out.sigma = setup.sigma_bar.scaled(2.0 * r * r * r / (setup.rho_out * out.b * out.b));
  out.omega = out.sigma.omega();
  return out;
}

DimensionalOutputs redimensionalize(const NondimParams& params, const NondimOutputs& out,
                                    const PhysicalSetup& setup) {
  const double r = setup.ring_radius;
  DimensionalOutputs d;
  d.w_bar = params.b * out.w / (r * r);
  d.gamma_bar = params.b * out.gamma;
  d.nu_bar = setup.rho_out * params.b * params.b * out.nu / (params.eps * params.eps);
  return d;
}

NondimOutputs nondimensionalize_outputs(const NondimParams& params, const DimensionalOutputs& d,
                                        const PhysicalSetup& setup) {
  const double r = setup.ring_radius;
  NondimOutputs out;
  out.w = r * r * d.w_bar / params.b;
  out.gamma = d.gamma_bar / params.b;
  out.nu = params.eps * params.eps * d.nu_bar / (setup.rho_out * params.b * params.b);
  return out;
}

Asymptotics asymptotic_wgn(double eps, double rho, const SigmaLaw& sigma) {
  const double es = eps * sigma.value(eps);
  Asymptotics a;
  a.w = (kLog8 - 0.5 + std::log(1.0 / eps)) / (4.0 * kPi) + rho * kPi + 0.5 * es * kPi;
  a.gamma = 3.0 / (8.0 * kPi) * std::log(8.0 / eps) - 15.0 / (16.0 * kPi) - 0.5 * rho * kPi -
            0.25 * es * kPi;
  const double base = 4.0 * rho - 1.0 / (4.0 * kPi * kPi);
  a.nu = base + es;
  if (es > 0.0) a.nu_rescaled = base / es + 1.0;
  a.s = 2.0 * rho * kPi + es * kPi;
  return a;
}

double kelvin_hicks(const PhysicalSetup& setup) {
  const double r = setup.ring_radius;
  const double eb = setup.eps_bar;
  const double a_bar = kPi * r * eb * eb * setup.xi_bar;
  const double ab = a_bar / setup.b_bar;
  const double core = std::log(8.0 * r / eb) - 0.5 + 0.25 * ab * ab * setup.rho_in / setup.rho_out;
  const double tension =
      kPi * eb * setup.sigma_bar.value(eb / r) / (r * setup.b_bar * setup.rho_out);
  return setup.b_bar / (4.0 * kPi * r) * core + tension;
}

double omega_c(double rho, double omega) {
  return omega * (8.0 * rho + 1.0 / (2.0 * kPi * kPi));
}

MarginReport degeneracy_margin(double rho, double omega) {
  const double wc = omega_c(rho, omega);
  auto at = [wc](double l) { return (l - 1.0) * std::abs(l + 1.0 - wc) / l; };
  MarginReport best;
  best.margin = std::numeric_limits<double>::infinity();
  auto consider = [&](long l) {
    if (l < 2) return;
    const double v = at(static_cast<double>(l));
    if (v < best.margin) {
      best.margin = v;
      best.worst_mode = static_cast<int>(std::min<long>(l, std::numeric_limits<int>::max()));
    }
  };
  constexpr long kScan = 10000;
  for (long l = 2; l <= kScan; ++l) consider(l);
  // Beyond the scan the only candidates sit next to l = wc - 1.
  if (wc - 1.0 > kScan) {
    consider(static_cast<long>(std::floor(wc - 1.0)));
    consider(static_cast<long>(std::ceil(wc - 1.0)));
  }
  best.degenerate = best.margin <= 1e-12 * std::max(1.0, wc);
  if (best.degenerate) best.margin = 0.0;
  return best;
}

namespace {

// Polynomial extrapolation to eps = 0 (Neville) of samples on a geometric grid.
double extrapolate_to_zero(const std::vector<double>& x, std::vector<double> y) {
  const std::size_t n = x.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      y[i] = (x[i + m] * y[i] - x[i] * y[i + 1]) / (x[i + m] - x[i]);
    }
  }
  return y[0];
}

}  // namespace

SigmaReport check_sigma(const SigmaLaw& law, double rho) {
  if (!(rho >= 0.0)) throw ParameterError("check_sigma: rho must be non-negative");
  SigmaReport rep;
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(0.1 * std::pow(10.0, -7.0 * k / 60.0));
  for (double e : grid) {
    const double s = law.value(e);
    if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("check_sigma: sigma negative or not finite");
  }
  if (law.is_zero()) {
    rep.notes.push_back("sigma vanishes; no surface-tension conditions apply");
    return rep;
  }

  // eps^2 sigma -> 0: small at the end of the grid and not growing over the tail.
  const double tail0 = grid[grid.size() - 10] * grid[grid.size() - 10] * law.value(grid[grid.size() - 10]);
  const double tail1 = grid.back() * grid.back() * law.value(grid.back());
  rep.eps2_sigma_vanishes = tail1 <= tail0 && tail1 < 1e-3;

  for (double e : grid) {
    const double ratio = e * std::abs(law.derivative(e)) / law.value(e);
    rep.derivative_ratio_max = std::max(rep.derivative_ratio_max, ratio);
  }
  rep.derivative_bounded = std::isfinite(rep.derivative_ratio_max) && rep.derivative_ratio_max <= 10.0;

  std::vector<double> xs, ys;
  for (int k = 0; k < 4; ++k) {
    const double e = 1e-4 / std::pow(2.0, k);
    xs.push_back(e);
    ys.push_back(1.0 / (e * law.value(e)));
  }
  rep.omega_estimate = std::max(0.0, extrapolate_to_zero(xs, ys));
  if (const auto declared = law.omega()) {
    rep.omega = declared;
    rep.omega_declared = true;
  } else {
    rep.omega = rep.omega_estimate;
  }
  rep.margin = degeneracy_margin(rho, *rep.omega);
  rep.excluded = rep.margin->degenerate;
  if (!rep.eps2_sigma_vanishes) rep.notes.push_back("eps^2 sigma does not vanish");
  if (!rep.derivative_bounded) rep.notes.push_back("eps |sigma'| is not bounded by sigma");
  if (rep.excluded) rep.notes.push_back("omega lies in the excluded set");
  rep.admissible = rep.eps2_sigma_vanishes && rep.derivative_bounded && !rep.excluded;
  return rep;
}

}  // namespace thinring
