#pragma once

#include <optional>
#include <string>
#include <vector>

// Surface-tension laws, scalings between physical and rescaled variables,
// leading-order asymptotics and the degenerate set of the linearization.

namespace thinring {

/// sigma(eps) from a small family of laws.
struct SigmaLaw {
  enum class Kind { None, COverEps, CLogOverEps, CPower };

  Kind kind = Kind::None;
  double c = 0.0;
  double p = 1.5;  ///< exponent for CPower, in (1, 2)

  static SigmaLaw none() { return {}; }
  static SigmaLaw c_over_eps(double c) { return {Kind::COverEps, c, 1.0}; }
  static SigmaLaw c_log_over_eps(double c) { return {Kind::CLogOverEps, c, 1.0}; }
  /// Throws ParameterError unless 1 < p < 2.
  static SigmaLaw c_power(double c, double p);
  /// Parses none | c_over_eps | c_log_over_eps | c_power.
  static SigmaLaw from_name(const std::string& kind, double c, double p);

  bool is_zero() const { return kind == Kind::None || c == 0.0; }
  double value(double eps) const;
  double derivative(double eps) const;
  /// lim 1/(eps sigma) where the law fixes it; empty for sigma = 0.
  std::optional<double> omega() const;
  SigmaLaw scaled(double factor) const;
  std::string name() const;
};

/// Dimensional description of a ring.
struct PhysicalSetup {
  double rho_in = 0.0;
  double rho_out = 1.0;
  double ring_radius = 1.0;  ///< R
  double eps_bar = 0.0;      ///< cross-section radius
  double b_bar = 1.0;        ///< circulation
  double xi_bar = 0.0;       ///< potential vorticity
  SigmaLaw sigma_bar;        ///< dimensional surface tension as a law in eps = eps_bar / R
};

struct NondimParams {
  double rho = 0.0;
  SigmaLaw sigma;
  std::optional<double> omega;
  double eps = 0.0;
  double a = 0.0;  ///< pi R^2 eps_bar^2 xi_bar
  double b = 0.0;  ///< R b_bar
};

/// Throws ParameterError on invalid setups (b_bar = 0, rho_out <= 0, rho_in > rho_out, ...).
NondimParams nondimensionalize(const PhysicalSetup& setup);

struct NondimOutputs {
  double w = 0.0;
  double gamma = 0.0;
  double nu = 0.0;
};

struct DimensionalOutputs {
  double w_bar = 0.0;
  double gamma_bar = 0.0;
  double nu_bar = 0.0;
};

DimensionalOutputs redimensionalize(const NondimParams& params, const NondimOutputs& out,
                                    const PhysicalSetup& setup);
NondimOutputs nondimensionalize_outputs(const NondimParams& params, const DimensionalOutputs& out,
                                        const PhysicalSetup& setup);

struct Asymptotics {
  double w = 0.0;
  double gamma = 0.0;
  double nu = 0.0;
  /// nu / (eps sigma): (1/(eps sigma))(4 rho - 1/(4 pi^2)) + 1; empty when sigma = 0.
  std::optional<double> nu_rescaled;
  double s = 0.0;  ///< 2 rho pi + eps sigma pi
};

Asymptotics asymptotic_wgn(double eps, double rho, const SigmaLaw& sigma);

/// Ring speed from the generalized Kelvin-Hicks law.
double kelvin_hicks(const PhysicalSetup& setup);

/// omega (8 rho + 1/(2 pi^2)), the quantity whose integer values >= 3 are excluded.
double omega_c(double rho, double omega);

struct MarginReport {
  double margin = 0.0;
  int worst_mode = 2;
  bool degenerate = false;
};

/// min over l >= 2 of |omega c (1 - l) - 1 + l^2| / l.
MarginReport degeneracy_margin(double rho, double omega);

struct SigmaReport {
  std::optional<double> omega;     ///< value used for the margin
  double omega_estimate = 0.0;     ///< extrapolated from samples
  bool omega_declared = false;     ///< omega came from the law itself
  bool eps2_sigma_vanishes = true;
  bool derivative_bounded = true;
  double derivative_ratio_max = 0.0;  ///< max eps |sigma'| / sigma on the sample grid
  std::optional<MarginReport> margin;
  bool excluded = false;
  bool admissible = true;
  std::vector<std::string> notes;
};

/// Throws ParameterError if sigma is negative on the sample grid.
SigmaReport check_sigma(const SigmaLaw& law, double rho);

}  // namespace thinring
