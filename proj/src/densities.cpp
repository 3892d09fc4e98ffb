// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pdmp/error.hpp"
#include "pdmp/regimes.hpp"

namespace pdmp {
namespace {

// Integral over (0, half) of x^(e-1) * smooth(x) given log smooth(x) and e > 0.
// For e < 1 substitute u = x^e, which removes the endpoint singularity:
//   int_0^h x^(e-1) s(x) dx = (1/e) int_0^(h^e) s(u^(1/e)) du.
template <class LogSmooth>
double endpoint_integral(double e, double half, LogSmooth log_smooth, double tol, double& err) {
  boost::math::quadrature::tanh_sinh<double> ts;
  double e_est = 0.0;
  double value = 0.0;
  if (e < 1.0) {
    const double top = std::pow(half, e);
    auto f = [&](double u) {
      const double log_x = std::log(u) / e;
      return std::exp(log_smooth(log_x, std::exp(log_x)));
    };
    value = ts.integrate(f, 0.0, top, tol, &e_est) / e;
    e_est /= e;
  } else {
    auto f = [&](double x) {
      const double log_x = std::log(x);
      return std::exp((e - 1.0) * log_x + log_smooth(log_x, x));
    };
    value = ts.integrate(f, 0.0, half, tol, &e_est);
  }
  err += e_est;
  return value;
}

}  // namespace

DensityModel::DensityModel(const SwitchingSpec& spec, double tol) : spec_(spec) {
  spec_.validate();
  if (!(tol > 0.0)) throw ValidationError("quadrature tolerance must be > 0");
  switch (spec_.kind) {
    case NormalFormKind::SupPitchfork:
    case NormalFormKind::SupHopfRadial: quadratic_ = true; break;
    case NormalFormKind::Transcritical: quadratic_ = false; break;
    default:
      throw RegimeError(std::string("no invariant density for kind ") +
                        std::string(to_string(spec_.kind)));
  }
  if (compare_rates(spec_) != Comparison::Super)
    throw RegimeError(
        "invariant density exists only for lambda+/p+ < -lambda-/p- (super regime); at or "
        "beyond the threshold the candidate density is not integrable at 0");

  const double lm = spec_.lambda_minus, lp = spec_.lambda_plus;
  const double pm = spec_.p_minus, pp = spec_.p_plus;
  const double div = quadratic_ ? 2.0 : 1.0;
  exp_.x_exp = -lm / pm - lp / pp;
  exp_.left_exp = lm / (div * pm);
  exp_.right_exp = lp / (div * pp);
  b_ = quadratic_ ? std::sqrt(pp) : pp;

  // Shift so the unnormalized integrand peaks near 1.
  log_c_ = 0.0;
  double shift = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double x = b_ * k / 200.0;
    for (Mode m : {Mode::Minus, Mode::Plus}) shift = std::max(shift, log_density(m, x, b_ - x));
  }
  log_c_ = -shift;

  const double half = 0.5 * b_;
  double err = 0.0;
  double mass[2] = {0.0, 0.0};
  for (Mode m : {Mode::Minus, Mode::Plus}) {
    const int idx = m == Mode::Minus ? 0 : 1;
    // Left piece: density = x^(a-1) * smooth(x).
    const double a = exp_.x_exp;
    auto left_smooth = [&](double log_x, double x) {
      return log_density_core(m, log_x, x, std::log(b_ - x), false, true);
    };
    // Right piece in delta = b - x: density = delta^(e-1) * smooth.
    const double c = exp_.right_exp;
    const double e_right = m == Mode::Minus ? c + 1.0 : c;
    auto right_smooth = [&](double log_d, double d) {
      return log_density_core(m, std::log(b_ - d), b_ - d, log_d, true, false);
    };
    mass[idx] = endpoint_integral(a, half, left_smooth, tol, err) +
                endpoint_integral(e_right, half, right_smooth, tol, err);
  }
  const double total = mass[0] + mass[1];
  if (!(std::isfinite(total) && total > 0.0))
    throw NumericError("normalization quadrature produced a non-finite mass");
  if (err > 100.0 * tol * total)
    throw NumericError("normalization quadrature did not converge: error estimate " +
                       std::to_string(err / total) + " relative, tolerance " +
                       std::to_string(tol));
  log_c_ -= std::log(total);
  c_ = std::exp(log_c_);
  mass_minus_ = mass[0] / total;
  mass_plus_ = mass[1] / total;
  quad_err_ = err / total;
}

double DensityModel::log_flux_magnitude(double x, double dist_to_end) const {
  const double g = quadratic_ ? x * x : x;
  const double right = quadratic_ ? dist_to_end * (b_ + x) : dist_to_end;  // p+ - g(x)
  return log_c_ + exp_.x_exp * std::log(x) + exp_.left_exp * std::log(-spec_.p_minus + g) +
         exp_.right_exp * std::log(right);
}

double DensityModel::log_density_core(Mode m, double log_x, double x, double log_d,
                                      bool with_x_power, bool with_d_power) const {
  // rho = phi/f with |f_{-1}| = x (-p_- + g) and |f_1| = x (p_+ - g).
  const double g = quadratic_ ? x * x : x;
  const double x_pow = exp_.x_exp - 1.0;
  const double left_pow = m == Mode::Minus ? exp_.left_exp - 1.0 : exp_.left_exp;
  const double right_pow = m == Mode::Minus ? exp_.right_exp : exp_.right_exp - 1.0;
  double out = log_c_ + left_pow * std::log(-spec_.p_minus + g);
  if (with_x_power) out += x_pow * log_x;
  if (with_d_power) out += right_pow * log_d;
  if (quadratic_) out += right_pow * std::log(b_ + x);  // p+ - x^2 = (b - x)(b + x)
  return out;
}

double DensityModel::log_density(Mode m, double x, double dist_to_end) const {
  return log_density_core(m, std::log(x), x, std::log(dist_to_end), true, true);
}

FluxValue DensityModel::flux(double x) const {
  if (!in_support(x)) throw DomainError("flux is defined on the open support only");
  const double mag = std::exp(log_flux_magnitude(x, b_ - x));
  // rho_{-1} > 0 and f_{-1} < 0 on the support, so phi_{-1} = rho_{-1} f_{-1} < 0.
  return {-mag, mag};
}

double DensityModel::density(Mode m, double x) const {
  if (!in_support(x)) return 0.0;
  return std::exp(log_density(m, x, b_ - x));
}

double DensityModel::mirror_density(Mode m, double x) const {
  if (!quadratic_) throw DomainError("the transcritical form has no mirror measure");
  return density(m, -x);
}

double DensityModel::flux_derivative(double x) const {
  const double h = 1e-6 * b_;
  return (flux(x + h).phi_minus - flux(x - h).phi_minus) / (2.0 * h);
}

std::pair<double, double> DensityModel::fokker_planck_residual(double x) const {
  const double margin = 1e-3 * b_;
  if (!(x >= margin && x <= b_ - margin))
    throw DomainError("Fokker-Planck residual needs x at least 1e-3*|support| from the ends");
  const double h = 1e-6 * b_;
  const FluxValue lo = flux(x - h), hi = flux(x + h), mid = flux(x);
  const double d_minus = (hi.phi_minus - lo.phi_minus) / (2.0 * h);
  const double d_plus = (hi.phi_plus - lo.phi_plus) / (2.0 * h);
  const double f_minus = eval_field(spec_.mode_spec(Mode::Minus), x);
  const double f_plus = eval_field(spec_.mode_spec(Mode::Plus), x);
  const double lm = spec_.lambda_minus, lp = spec_.lambda_plus;
  const double r1 = d_minus - (-(lm / f_minus) * mid.phi_minus + (lp / f_plus) * mid.phi_plus);
  const double r2 = d_plus - (-(lp / f_plus) * mid.phi_plus + (lm / f_minus) * mid.phi_minus);
  return {r1, r2};
}

double l1_distance(const Histogram& hist, const DensityModel& model, ModeSelector sel) {
  if (hist.total == 0) throw ValidationError("l1_distance of a histogram without samples");
  if (hist.lo > 0.0 || hist.hi < model.support_end())
    throw ValidationError("histogram range must cover the density support");
  const std::vector<double> emp = hist.density(sel);
  const double w = hist.bin_width();
  auto analytic = [&](double x) {
    switch (sel) {
      case ModeSelector::Minus: return model.density(Mode::Minus, x);
      case ModeSelector::Plus: return model.density(Mode::Plus, x);
      case ModeSelector::Marginal: return model.marginal(x);
    }
    return 0.0;
  };
  double l1 = 0.0;
  for (std::size_t k = 0; k < hist.bins; ++k) {
    const double a = hist.lo + static_cast<double>(k) * w;
    const double avg =
        boost::math::quadrature::gauss<double, 5>::integrate(analytic, a, a + w) / w;
    l1 += std::fabs(emp[k] - avg) * w;
  }
  return l1;
}

}  // namespace pdmp
