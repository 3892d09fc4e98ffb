// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdmp/normal_forms.hpp"
#include "pdmp/rng.hpp"

namespace pdmp {

/// State of the driving two-state chain E.
enum class Mode : int { Minus = -1, Plus = 1 };

constexpr Mode flip(Mode m) { return m == Mode::Minus ? Mode::Plus : Mode::Minus; }
constexpr int to_int(Mode m) { return static_cast<int>(m); }
Mode mode_from_int(int i);

/// Two parameter values of one normal form and the chain's switching rates.
/// lambda_minus is the rate of leaving mode -1, lambda_plus of leaving +1.
struct SwitchingSpec {
  NormalFormKind kind = NormalFormKind::SupPitchfork;
  double p_minus = -1.0;
  double p_plus = 1.0;
  double lambda_minus = 1.0;
  double lambda_plus = 1.0;

  /// Throws ValidationError unless p_minus < 0 < p_plus and both rates > 0.
  void validate() const;
  NormalFormSpec mode_spec(Mode m) const {
    return {kind, m == Mode::Minus ? p_minus : p_plus};
  }
  double rate(Mode m) const { return m == Mode::Minus ? lambda_minus : lambda_plus; }
  /// Stationary probability of the chain being in mode m.
  double stationary_weight(Mode m) const;
};

struct StopCondition {
  double horizon = 1.0;
  /// Diagnostic level: the first time |X| reaches it is recorded.
  double blowup_guard = 1e6;
  /// A run reaching |X| < absorption_guard from a nonzero state is stopped
  /// and reported absorbed. The 1e-300 underflow clamp always applies.
  double absorption_guard = 1e-12;

  void validate(const SwitchingSpec& spec) const;
};

struct Segment {
  double t_start = 0.0;
  double x_start = 0.0;
  Mode mode = Mode::Minus;
  double duration = 0.0;
};

struct TrajectoryStatus {
  enum class Kind { HorizonReached, BlewUp, Absorbed };
  Kind kind = Kind::HorizonReached;
  double t_end = 0.0;
  Direction direction = Direction::Up;  // meaningful for BlewUp only
};

/// Event-exact path: segments are contiguous, modes alternate, and the
/// durations sum to status.t_end.
struct Trajectory {
  SwitchingSpec spec;
  std::vector<Segment> segments;
  TrajectoryStatus status;
  double x_end = 0.0;  // +-inf after blow-up
  std::uint64_t seed = 0;
  /// First time |X| >= blowup_guard, if it happened.
  std::optional<double> guard_time;

  bool blew_up() const { return status.kind == TrajectoryStatus::Kind::BlewUp; }
  bool absorbed() const { return status.kind == TrajectoryStatus::Kind::Absorbed; }
  bool reached_horizon() const { return status.kind == TrajectoryStatus::Kind::HorizonReached; }
};

/// Exp(rate) holding time, -ln(U)/rate.
double sample_switch_time(double rate, Rng& rng);

Trajectory simulate(const SwitchingSpec& spec, double x0, Mode i0, const StopCondition& stop,
                    std::uint64_t seed);

struct InitialPoint {
  double x0 = 0.0;
  Mode mode = Mode::Minus;
};

/// Run k starts from initial[k % initial.size()] with seed derive_seed(base, k).
/// threads == 0 means hardware concurrency; the result does not depend on it.
std::vector<Trajectory> simulate_ensemble(const SwitchingSpec& spec,
                                          std::span<const InitialPoint> initial,
                                          const StopCondition& stop, std::size_t n,
                                          std::uint64_t base_seed, unsigned threads = 1);

/// Throws ValidationError describing the first broken invariant.
void validate_trajectory(const Trajectory& traj);

/// X at time t (0 <= t <= status.t_end), evaluated by the exact flow.
double state_at(const Trajectory& traj, double t);

/// Fraction of elapsed time spent in mode -1.
double time_fraction_minus(const Trajectory& traj);

/// inf{t : X_t <= level} (or >= level when `above`), exact up to bisection.
std::optional<double> first_passage(const Trajectory& traj, double level, bool above);

struct PlanarTrajectory {
  Trajectory radial;
  double theta0 = 0.0;
  /// (theta0 + t) mod 2pi.
  double theta_at(double t) const;
};

PlanarTrajectory hopf_simulate(const SwitchingSpec& spec, double theta0, double r0, Mode i0,
                               const StopCondition& stop, std::uint64_t seed);

}  // namespace pdmp
