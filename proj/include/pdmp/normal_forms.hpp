// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdmp {

/// Scalar bifurcation normal forms. The Hopf kinds are the radial parts of
/// the planar normal forms and live on r >= 0.
enum class NormalFormKind {
  SupPitchfork,   // x' = p x - x^3
  SubPitchfork,   // x' = p x + x^3
  Transcritical,  // x' = p x - x^2
  Fold,           // x' = p - x^2
  SupHopfRadial,  // r' = p r - r^3
  SubHopfRadial,  // r' = p r + r^3
};

std::string_view to_string(NormalFormKind kind);
/// Accepts the kebab-case CLI names ("sup-pitchfork", "fold", ...).
std::optional<NormalFormKind> parse_kind(std::string_view name);

bool is_hopf_radial(NormalFormKind kind);
/// True for every kind that has 0 as an equilibrium for all p (all but Fold).
bool has_zero_equilibrium(NormalFormKind kind);

struct NormalFormSpec {
  NormalFormKind kind = NormalFormKind::SupPitchfork;
  double p = 0.0;
};

enum class Direction { Down = -1, Up = 1 };

/// Outcome of advancing a normal form for a fixed time.
struct FlowResult {
  enum class Outcome { Value, BlowUp };
  Outcome outcome = Outcome::Value;
  double x = 0.0;          // valid for Value
  double t_star = 0.0;     // valid for BlowUp
  Direction direction = Direction::Up;

  bool is_value() const { return outcome == Outcome::Value; }
  bool is_blow_up() const { return outcome == Outcome::BlowUp; }

  static FlowResult value(double x) { return {Outcome::Value, x, 0.0, Direction::Up}; }
  static FlowResult blow_up(double t_star, Direction d) {
    return {Outcome::BlowUp, 0.0, t_star, d};
  }
};

/// Values below this magnitude after a flow are clamped to exactly 0.
inline constexpr double kUnderflowClamp = 1e-300;

double eval_field(const NormalFormSpec& spec, double x);

/// d f / d x, used for linear stability labels.
double eval_field_derivative(const NormalFormSpec& spec, double x);

/// Closed-form solution at time t. Returns BlowUp when the analytic escape
/// time is <= t.
FlowResult flow(const NormalFormSpec& spec, double x0, double t);

/// Finite escape time of the forward orbit of x0, if any.
std::optional<double> blow_up_time(const NormalFormSpec& spec, double x0);

enum class Stability { Stable, Unstable };

struct Equilibrium {
  double x = 0.0;
  Stability stability = Stability::Stable;
  /// Linearization vanishes; the label then reflects the nonlinear behavior.
  bool degenerate = false;
};

/// Real equilibria in ascending order (r >= 0 only for the Hopf kinds).
std::vector<Equilibrium> equilibria(const NormalFormSpec& spec);

double linearize_at_zero(const NormalFormSpec& spec);

}  // namespace pdmp
