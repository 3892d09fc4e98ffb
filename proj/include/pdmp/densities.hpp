// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "pdmp/engine.hpp"
#include "pdmp/occupation.hpp"

namespace pdmp {

/// Exponents of the stationary flux
///   phi_{-1}(x) = -C x^a (-p_- + g(x))^b (p_+ - g(x))^c,  phi_1 = -phi_{-1},
/// with g(x) = x^2 for the pitchfork family and g(x) = x for the
/// transcritical form.
struct DensityExponents {
  double x_exp = 0.0;      // a = -lambda_-/p_- - lambda_+/p_+
  double left_exp = 0.0;   // b = lambda_-/(2p_-) (pitchfork) or lambda_-/p_-
  double right_exp = 0.0;  // c = lambda_+/(2p_+) (pitchfork) or lambda_+/p_+
};

struct FluxValue {
  double phi_minus = 0.0;
  double phi_plus = 0.0;
};

/// Invariant density of the nontrivial ergodic measure carried by (0, inf)
/// in the super-threshold regime. Immutable once constructed.
///
/// rho_{-1} = phi_{-1}/f_{-1} and rho_1 = -phi_{-1}/f_1 share one constant C,
/// fixed by joint normalization of both modes; the per-mode masses are then
/// outputs and match the chain's stationary law.
class DensityModel {
 public:
  /// kind must be SupPitchfork, SupHopfRadial (radial part) or Transcritical.
  /// Throws RegimeError outside the super regime, NumericError if the
  /// quadrature misses tol.
  explicit DensityModel(const SwitchingSpec& spec, double tol = 1e-10);

  const SwitchingSpec& spec() const { return spec_; }
  const DensityExponents& exponents() const { return exp_; }
  /// Right end of the open support (0, b).
  double support_end() const { return b_; }
  double normalization() const { return c_; }
  double log_normalization() const { return log_c_; }
  double mode_mass(Mode m) const { return m == Mode::Minus ? mass_minus_ : mass_plus_; }
  /// Estimated absolute quadrature error of the total mass.
  double quadrature_error() const { return quad_err_; }

  bool in_support(double x) const { return x > 0.0 && x < b_; }

  /// Throws DomainError unless x lies strictly inside the support.
  FluxValue flux(double x) const;
  /// Normalized density of mode m at x; 0 outside the open support.
  double density(Mode m, double x) const;
  double marginal(double x) const { return density(Mode::Minus, x) + density(Mode::Plus, x); }
  /// Density of the mirror measure carried by (-inf, 0) (pitchfork family).
  double mirror_density(Mode m, double x) const;

  /// Flux-ODE residuals at x via central differences with h = 1e-6*b;
  /// rejects points closer than 1e-3*b to an endpoint.
  std::pair<double, double> fokker_planck_residual(double x) const;
  /// Central-difference derivative of phi_{-1}, same step as the residual.
  double flux_derivative(double x) const;

 private:
  double log_flux_magnitude(double x, double dist_to_end) const;
  double log_density(Mode m, double x, double dist_to_end) const;
  double log_density_core(Mode m, double log_x, double x, double log_d, bool with_x_power,
                          bool with_d_power) const;

  SwitchingSpec spec_;
  bool quadratic_ = true;  // g(x) = x^2
  DensityExponents exp_;
  double b_ = 0.0;
  double c_ = 0.0;
  double log_c_ = 0.0;
  double mass_minus_ = 0.0;
  double mass_plus_ = 0.0;
  double quad_err_ = 0.0;
};

/// Sum over bins of |histogram density - bin average of the analytic
/// density| * bin width; bin averages by 5-point Gauss-Legendre.
double l1_distance(const Histogram& hist, const DensityModel& model, ModeSelector sel);

}  // namespace pdmp
