// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/normal_forms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pdmp/error.hpp"

namespace pdmp {
namespace {

// Hopf radial kinds share the scalar pitchfork code on r >= 0.
NormalFormKind scalar_kind(NormalFormKind kind) {
  switch (kind) {
    case NormalFormKind::SupHopfRadial: return NormalFormKind::SupPitchfork;
    case NormalFormKind::SubHopfRadial: return NormalFormKind::SubPitchfork;
    default: return kind;
  }
}

void check_state(const NormalFormSpec& spec, double x) {
  if (!std::isfinite(x)) throw DomainError("state must be finite");
  if (!std::isfinite(spec.p)) throw DomainError("parameter p must be finite");
  if (is_hopf_radial(spec.kind) && x < 0.0)
    throw DomainError("radial normal forms are defined for r >= 0 only");
}

double clamp_underflow(double x) { return std::fabs(x) < kUnderflowClamp ? 0.0 : x; }

// (1 - e^{-a t}) / a, continuous through a = 0.
double decay_integral(double a, double t) {
  return a == 0.0 ? t : -std::expm1(-a * t) / a;
}

// (e^{a t} - 1) / a, continuous through a = 0.
double growth_integral(double a, double t) {
  return a == 0.0 ? t : std::expm1(a * t) / a;
}

// x' = p x + sigma x^3 via u = x^{-2}, u' = -2p u - 2 sigma.
std::optional<double> pitchfork_escape(double p, double sigma, double x0) {
  if (sigma < 0.0 || x0 == 0.0) return std::nullopt;
  const double x2 = x0 * x0;
  if (p == 0.0) return 1.0 / (2.0 * x2);
  const double ratio = p / x2;
  if (ratio <= -1.0) return std::nullopt;  // inside the unstable cycle/equilibria
  return std::log1p(ratio) / (2.0 * p);
}

double pitchfork_value(double p, double sigma, double x0, double t) {
  const double x2 = x0 * x0;
  const double mag = std::fabs(x0);
  double out;
  if (p < 0.0) {
    const double denom = 1.0 - 2.0 * sigma * x2 * growth_integral(2.0 * p, t);
    out = mag * std::exp(p * t) / std::sqrt(denom);
  } else {
    const double denom =
        std::exp(-2.0 * p * t) - 2.0 * sigma * x2 * decay_integral(2.0 * p, t);
    out = mag / std::sqrt(denom);
  }
  return std::copysign(out, x0);
}

// x' = p x - x^2 via u = 1/x.
std::optional<double> transcritical_escape(double p, double x0) {
  if (x0 >= 0.0) return std::nullopt;
  if (p == 0.0) return -1.0 / x0;
  const double ratio = -p / x0;
  if (ratio <= -1.0) return std::nullopt;
  return std::log1p(ratio) / p;
}

double transcritical_value(double p, double x0, double t) {
  if (p < 0.0) return x0 * std::exp(p * t) / (1.0 + x0 * growth_integral(p, t));
  return x0 / (std::exp(-p * t) + x0 * decay_integral(p, t));
}

// x' = p - x^2 (Riccati).
std::optional<double> fold_escape(double p, double x0) {
  if (p > 0.0) {
    const double s = std::sqrt(p);
    if (x0 >= -s) return std::nullopt;
    return std::atanh(-s / x0) / s;
  }
  if (p == 0.0) {
    if (x0 >= 0.0) return std::nullopt;
    return -1.0 / x0;
  }
  const double s = std::sqrt(-p);
  return (std::atan(x0 / s) + std::numbers::pi / 2.0) / s;
}

double fold_value(double p, double x0, double t) {
  if (p > 0.0) {
    const double s = std::sqrt(p);
    const double th = std::tanh(s * t);
    return s * (x0 + s * th) / (s + x0 * th);
  }
  if (p == 0.0) return x0 / (1.0 + x0 * t);
  const double s = std::sqrt(-p);
  return s * std::tan(std::atan(x0 / s) - s * t);
}

// Same points as equilibria(), without allocating.
bool is_listed_equilibrium(const NormalFormSpec& spec, double x0) {
  const double p = spec.p;
  switch (spec.kind) {
    case NormalFormKind::SupPitchfork:
      return x0 == 0.0 || (p > 0.0 && std::fabs(x0) == std::sqrt(p));
    case NormalFormKind::SubPitchfork:
      return x0 == 0.0 || (p < 0.0 && std::fabs(x0) == std::sqrt(-p));
    case NormalFormKind::Transcritical: return x0 == 0.0 || x0 == p;
    case NormalFormKind::Fold: return p >= 0.0 && std::fabs(x0) == std::sqrt(p);
    case NormalFormKind::SupHopfRadial: return x0 == 0.0 || (p > 0.0 && x0 == std::sqrt(p));
    case NormalFormKind::SubHopfRadial: return x0 == 0.0 || (p < 0.0 && x0 == std::sqrt(-p));
  }
  return false;
}

}  // namespace

std::string_view to_string(NormalFormKind kind) {
  switch (kind) {
    case NormalFormKind::SupPitchfork: return "sup-pitchfork";
    case NormalFormKind::SubPitchfork: return "sub-pitchfork";
    case NormalFormKind::Transcritical: return "transcritical";
    case NormalFormKind::Fold: return "fold";
    case NormalFormKind::SupHopfRadial: return "sup-hopf";
    case NormalFormKind::SubHopfRadial: return "sub-hopf";
  }
  return "unknown";
}

std::optional<NormalFormKind> parse_kind(std::string_view name) {
  for (auto k : {NormalFormKind::SupPitchfork, NormalFormKind::SubPitchfork,
                 NormalFormKind::Transcritical, NormalFormKind::Fold,
                 NormalFormKind::SupHopfRadial, NormalFormKind::SubHopfRadial}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool is_hopf_radial(NormalFormKind kind) {
  return kind == NormalFormKind::SupHopfRadial || kind == NormalFormKind::SubHopfRadial;
}

bool has_zero_equilibrium(NormalFormKind kind) { return kind != NormalFormKind::Fold; }

double eval_field(const NormalFormSpec& spec, double x) {
  check_state(spec, x);
  const double p = spec.p;
  switch (scalar_kind(spec.kind)) {
    case NormalFormKind::SupPitchfork: return p * x - x * x * x;
    case NormalFormKind::SubPitchfork: return p * x + x * x * x;
    case NormalFormKind::Transcritical: return p * x - x * x;
    case NormalFormKind::Fold: return p - x * x;
    default: break;
  }
  throw DomainError("unknown normal form");
}

double eval_field_derivative(const NormalFormSpec& spec, double x) {
  check_state(spec, x);
  const double p = spec.p;
  switch (scalar_kind(spec.kind)) {
    case NormalFormKind::SupPitchfork: return p - 3.0 * x * x;
    case NormalFormKind::SubPitchfork: return p + 3.0 * x * x;
    case NormalFormKind::Transcritical: return p - 2.0 * x;
    case NormalFormKind::Fold: return -2.0 * x;
    default: break;
  }
  throw DomainError("unknown normal form");
}

std::optional<double> blow_up_time(const NormalFormSpec& spec, double x0) {
  check_state(spec, x0);
  if (is_listed_equilibrium(spec, x0)) return std::nullopt;
  switch (scalar_kind(spec.kind)) {
    case NormalFormKind::SupPitchfork: return std::nullopt;
    case NormalFormKind::SubPitchfork: return pitchfork_escape(spec.p, 1.0, x0);
    case NormalFormKind::Transcritical: return transcritical_escape(spec.p, x0);
    case NormalFormKind::Fold: return fold_escape(spec.p, x0);
    default: break;
  }
  throw DomainError("unknown normal form");
}

FlowResult flow(const NormalFormSpec& spec, double x0, double t) {
  check_state(spec, x0);
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("flow time must be finite and >= 0");
  if (t == 0.0) return FlowResult::value(x0);

  if (const auto t_star = blow_up_time(spec, x0); t_star && *t_star <= t) {
    // Escape direction: Fold and Transcritical only escape downwards.
    const Direction dir = (scalar_kind(spec.kind) == NormalFormKind::SubPitchfork && x0 > 0.0)
                              ? Direction::Up
                              : Direction::Down;
    return FlowResult::blow_up(*t_star, dir);
  }
  if (is_listed_equilibrium(spec, x0)) return FlowResult::value(x0);

  const double p = spec.p;
  double x = 0.0;
  switch (scalar_kind(spec.kind)) {
    case NormalFormKind::SupPitchfork: x = pitchfork_value(p, -1.0, x0, t); break;
    case NormalFormKind::SubPitchfork: x = pitchfork_value(p, 1.0, x0, t); break;
    case NormalFormKind::Transcritical: x = transcritical_value(p, x0, t); break;
    case NormalFormKind::Fold: x = fold_value(p, x0, t); break;
    default: throw DomainError("unknown normal form");
  }
  return FlowResult::value(clamp_underflow(x));
}

std::vector<Equilibrium> equilibria(const NormalFormSpec& spec) {
  if (!std::isfinite(spec.p)) throw DomainError("parameter p must be finite");
  const double p = spec.p;
  using S = Stability;
  switch (spec.kind) {
    case NormalFormKind::SupPitchfork:
      if (p > 0.0) {
        const double r = std::sqrt(p);
        return {{-r, S::Stable, false}, {0.0, S::Unstable, false}, {r, S::Stable, false}};
      }
      return {{0.0, S::Stable, p == 0.0}};
    case NormalFormKind::SubPitchfork:
      if (p < 0.0) {
        const double r = std::sqrt(-p);
        return {{-r, S::Unstable, false}, {0.0, S::Stable, false}, {r, S::Unstable, false}};
      }
      return {{0.0, S::Unstable, p == 0.0}};
    case NormalFormKind::Transcritical:
      if (p < 0.0) return {{p, S::Unstable, false}, {0.0, S::Stable, false}};
      if (p > 0.0) return {{0.0, S::Unstable, false}, {p, S::Stable, false}};
      return {{0.0, S::Unstable, true}};
    case NormalFormKind::Fold:
      if (p > 0.0) {
        const double r = std::sqrt(p);
        return {{-r, S::Unstable, false}, {r, S::Stable, false}};
      }
      if (p == 0.0) return {{0.0, S::Unstable, true}};
      return {};
    case NormalFormKind::SupHopfRadial:
      if (p > 0.0) return {{0.0, S::Unstable, false}, {std::sqrt(p), S::Stable, false}};
      return {{0.0, S::Stable, p == 0.0}};
    case NormalFormKind::SubHopfRadial:
      if (p < 0.0) return {{0.0, S::Stable, false}, {std::sqrt(-p), S::Unstable, false}};
      return {{0.0, S::Unstable, p == 0.0}};
  }
  return {};
}

double linearize_at_zero(const NormalFormSpec& spec) {
  if (!has_zero_equilibrium(spec.kind))
    throw DomainError("0 is not an equilibrium of the fold normal form");
  return eval_field_derivative(spec, 0.0);
}

}  // namespace pdmp
