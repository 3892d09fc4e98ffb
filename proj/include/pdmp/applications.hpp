// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pdmp/engine.hpp"

namespace pdmp::apps {

// ---------------------------------------------------------------------------
// Rosenzweig-MacArthur predator-prey model
//   x' = x(1 - x/p) - x y/(1 + x),   y' = beta x y/(1 + x) - m y

struct RMParams {
  double beta = 3.0;
  double m = 1.0;
  double p = 2.0;  // carrying capacity
};

std::array<double, 2> rm_field(const RMParams& params, std::array<double, 2> state);

/// (x*, y*) = (m/(beta - m), (1 - x*/p)(1 + x*)); for m=1, beta=3 this is
/// (1/2, 3(2p-1)/(4p)). Needs p > x* (p > 1/2 at the defaults).
std::array<double, 2> rm_coexistence_equilibrium(const RMParams& params);
std::array<double, 2> rm_coexistence_equilibrium(double p);

/// Trace of the finite-difference Jacobian at the coexistence equilibrium
/// (m=1, beta=3); analytically (p - 2)/(3p).
double rm_hopf_trace(double p);

// ---------------------------------------------------------------------------
// Van der Pol fast subsystem x' = p - x^3/3 + x

double vdp_fast_field(double p, double x);
std::pair<double, double> vdp_fold_points();
/// Number of distinct real equilibria (3 inside the folds, 2 at a fold, 1 outside).
int vdp_equilibrium_count(double p);

// ---------------------------------------------------------------------------
// Adaptive-network swarming model, state (x1, x2, y1, y2, y3)

struct SwarmParams {
  double q = 1.0;
  double w2 = 1.0;
  double w3 = 2.0;
  double ae = 0.0;
  double de = 0.0;
  double a0 = 1.0;
  double d0 = 1.0;
};

enum class SwarmVariant {
  /// Right-hand side exactly as printed. The y1' line refers to a symbol L
  /// that the source never defines; evaluation fails unless a value is given.
  Verbatim,
  /// L <-> R symmetric variant: spontaneous switching q(x2 - x1) restores
  /// balance, the undefined L is read as x1, and y2' mirrors y1'.
  Symmetrized,
};

using SwarmState = std::array<double, 5>;

/// y3' is closed through the conservation law
///   (y1 + y2 + y3)' = a0 x1 x2 - d0 y3 + ae (x1^2 + x2^2) - de (y1 + y2).
SwarmState swarm_field(const SwarmParams& params, const SwarmState& s,
                       SwarmVariant variant = SwarmVariant::Symmetrized,
                       std::optional<double> verbatim_L = std::nullopt);

/// a0* = 2 d0 sqrt(2q/w3).
double swarm_pitchfork_threshold(double q, double w3, double d0);

/// ((x1)_+, (x1)_-) = 1/2 +- (1/2) sqrt(1 - 8 q d0^2/(w3 a0^2)); needs
/// a0 >= a0* and ae = de = 0.
std::pair<double, double> swarm_ordered_branch(const SwarmParams& params);

/// Steady state of the symmetrized model with ae = de = 0 for a given x1
/// (x2 = 1 - x1, y3 = a0 x1 x2/d0, y1 and y2 solved from their linear
/// equations). x1 = 1/2 is the disordered state.
SwarmState swarm_steady_state(const SwarmParams& params, double x1);

// ---------------------------------------------------------------------------
// Generic switched ODE on R^d with classic RK4 between switches.

using VectorField = std::function<void(std::span<const double>, std::span<double>)>;

struct GeneralSwitchedSpec {
  VectorField field_minus;
  VectorField field_plus;
  double lambda_minus = 1.0;
  double lambda_plus = 1.0;
  double step = 1e-3;
  double escape_radius = 1e6;
};

struct GeneralStop {
  double horizon = 1.0;
  /// Record the state every record_dt (0 disables); record times are hit
  /// exactly by shortening the RK4 step.
  double record_dt = 0.0;
};

struct GeneralSample {
  double t = 0.0;
  std::vector<double> x;
  Mode mode = Mode::Minus;
};

struct GeneralTrajectory {
  enum class Status { HorizonReached, NumericEscape };
  std::vector<GeneralSample> switches;  // state at t=0 and at every switch
  std::vector<GeneralSample> records;   // t = 0, record_dt, 2 record_dt, ...
  std::vector<double> x_end;
  double t_end = 0.0;
  Status status = Status::HorizonReached;
  std::uint64_t seed = 0;
};

/// One classic RK4 step of size h.
void rk4_step(const VectorField& f, std::span<double> x, double h);

GeneralTrajectory switched_simulate_general(const GeneralSwitchedSpec& spec,
                                            std::span<const double> x0, Mode i0,
                                            const GeneralStop& stop, std::uint64_t seed);

/// Central-difference Jacobian, step 1e-6*(1+|x_j|) per coordinate.
std::vector<std::vector<double>> numeric_jacobian(const VectorField& f,
                                                  std::span<const double> x);

/// Bisection for a sign change of f on [a, b] down to |b - a| <= tol.
double bisect_root(const std::function<double(double)>& f, double a, double b, double tol);

/// Roots of f on [a, b] located by scanning n uniform cells for sign changes
/// and refining each by bisection.
std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b,
                               std::size_t n, double tol);

}  // namespace pdmp::apps
