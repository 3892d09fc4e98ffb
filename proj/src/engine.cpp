// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "pdmp/error.hpp"

namespace pdmp {
namespace {

// Smallest tau in (0, d] with pred(flow(x, tau)); pred must be monotone along
// the orbit, which holds for scalar autonomous flows.
template <class Pred>
double bisect_crossing(const NormalFormSpec& nf, double x, double d, Pred pred) {
  double lo = 0.0;
  double hi = d;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(flow(nf, x, mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

Mode mode_from_int(int i) {
  if (i == -1) return Mode::Minus;
  if (i == 1) return Mode::Plus;
  throw ValidationError("mode must be -1 or +1, got " + std::to_string(i));
}

void SwitchingSpec::validate() const {
  std::ostringstream err;
  if (!(std::isfinite(p_minus) && p_minus < 0.0)) err << "p_minus must be finite and < 0; ";
  if (!(std::isfinite(p_plus) && p_plus > 0.0)) err << "p_plus must be finite and > 0; ";
  if (!(std::isfinite(lambda_minus) && lambda_minus > 0.0)) err << "lambda_minus must be > 0; ";
  if (!(std::isfinite(lambda_plus) && lambda_plus > 0.0)) err << "lambda_plus must be > 0; ";
  if (!err.str().empty()) throw ValidationError(err.str());
}

double SwitchingSpec::stationary_weight(Mode m) const {
  const double total = lambda_minus + lambda_plus;
  return m == Mode::Minus ? lambda_plus / total : lambda_minus / total;
}

void StopCondition::validate(const SwitchingSpec& spec) const {
  if (!(std::isfinite(horizon) && horizon > 0.0))
    throw ValidationError("horizon must be finite and > 0");
  const double scale = std::max({std::fabs(spec.p_minus), spec.p_plus, 1.0});
  if (!(blowup_guard > scale))
    throw ValidationError("blowup_guard must exceed max(|p_minus|, p_plus, 1)");
  if (!(absorption_guard >= 0.0)) throw ValidationError("absorption_guard must be >= 0");
}

double sample_switch_time(double rate, Rng& rng) {
  return exponential_from_uniform(rate, rng.uniform_open());
}

Trajectory simulate(const SwitchingSpec& spec, double x0, Mode i0, const StopCondition& stop,
                    std::uint64_t seed) {
  spec.validate();
  stop.validate(spec);
  if (!std::isfinite(x0)) throw DomainError("x0 must be finite");
  if (is_hopf_radial(spec.kind) && x0 < 0.0) throw DomainError("radial state must be >= 0");

  Trajectory traj;
  traj.spec = spec;
  traj.seed = seed;
  Rng rng(seed);

  const bool can_absorb = has_zero_equilibrium(spec.kind);
  const double absorb_level = std::max(stop.absorption_guard, kUnderflowClamp);
  const double guard = stop.blowup_guard;

  double t = 0.0;
  double x = x0;
  Mode mode = i0;
  if (std::fabs(x) >= guard) traj.guard_time = 0.0;

  for (;;) {
    const NormalFormSpec nf = spec.mode_spec(mode);
    const double hold = sample_switch_time(spec.rate(mode), rng);
    const double remaining = stop.horizon - t;
    const bool last = hold >= remaining;
    const double d = last ? remaining : hold;

    // Analytic escape inside this holding interval wins over the switch.
    if (const auto t_star = blow_up_time(nf, x); t_star && *t_star <= d) {
      if (!traj.guard_time) {
        const double tau = bisect_crossing(nf, x, *t_star, [&](const FlowResult& r) {
          return r.is_blow_up() || std::fabs(r.x) >= guard;
        });
        traj.guard_time = t + tau;
      }
      const FlowResult r = flow(nf, x, *t_star);
      traj.segments.push_back({t, x, mode, *t_star});
      traj.status = {TrajectoryStatus::Kind::BlewUp, t + *t_star, r.direction};
      traj.x_end = r.direction == Direction::Up ? std::numeric_limits<double>::infinity()
                                                : -std::numeric_limits<double>::infinity();
      return traj;
    }

    const double xe = flow(nf, x, d).x;

    if (!traj.guard_time && std::fabs(xe) >= guard) {
      const double tau = bisect_crossing(
          nf, x, d, [&](const FlowResult& r) { return std::fabs(r.x) >= guard; });
      traj.guard_time = t + tau;
    }

    if (can_absorb && x != 0.0 && std::fabs(xe) < absorb_level) {
      const double tau = bisect_crossing(
          nf, x, d, [&](const FlowResult& r) { return std::fabs(r.x) < absorb_level; });
      traj.segments.push_back({t, x, mode, tau});
      traj.status = {TrajectoryStatus::Kind::Absorbed, t + tau, Direction::Down};
      traj.x_end = flow(nf, x, tau).x;
      return traj;
    }

    traj.segments.push_back({t, x, mode, d});
    x = xe;
    if (last) {
      traj.status = {TrajectoryStatus::Kind::HorizonReached, stop.horizon, Direction::Up};
      traj.x_end = x;
      return traj;
    }
    t += d;
    mode = flip(mode);
  }
}

std::vector<Trajectory> simulate_ensemble(const SwitchingSpec& spec,
                                          std::span<const InitialPoint> initial,
                                          const StopCondition& stop, std::size_t n,
                                          std::uint64_t base_seed, unsigned threads) {
  if (n == 0) throw ValidationError("ensemble size must be >= 1");
  if (initial.empty()) throw ValidationError("at least one initial point is required");
  spec.validate();
  stop.validate(spec);

  std::vector<Trajectory> out(n);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const InitialPoint& ip = initial[k % initial.size()];
      out[k] = simulate(spec, ip.x0, ip.mode, stop, derive_seed(base_seed, k));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    run_range(0, n);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(n, b + chunk);
      pool.emplace_back([&, w, b, e] {
        try {
          run_range(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void validate_trajectory(const Trajectory& traj) {
  const auto& segs = traj.segments;
  if (segs.empty()) throw ValidationError("trajectory has no segments");
  if (segs.front().t_start != 0.0) throw ValidationError("first segment must start at t=0");
  double total = 0.0;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const Segment& s = segs[k];
    if (!(s.duration >= 0.0)) throw ValidationError("negative segment duration");
    total += s.duration;
    if (k + 1 == segs.size()) break;
    const Segment& next = segs[k + 1];
    if (next.mode != flip(s.mode))
      throw ValidationError("modes do not alternate at segment " + std::to_string(k + 1));
    if (next.t_start != s.t_start + s.duration)
      throw ValidationError("segments not contiguous at " + std::to_string(k + 1));
    const FlowResult r = flow(traj.spec.mode_spec(s.mode), s.x_start, s.duration);
    if (!r.is_value() || r.x != next.x_start)
      throw ValidationError("segment " + std::to_string(k + 1) +
                            " does not start at the flowed state");
  }
  const double t_end = segs.back().t_start + segs.back().duration;
  if (std::fabs(t_end - traj.status.t_end) > 1e-12 * std::max(1.0, t_end))
    throw ValidationError("segment end differs from status time");
  if (std::fabs(total - t_end) > 1e-9 * std::max(1.0, t_end))
    throw ValidationError("durations do not sum to the stopping time");
}

double state_at(const Trajectory& traj, double t) {
  if (traj.segments.empty()) throw ValidationError("empty trajectory");
  if (t < 0.0 || t > traj.status.t_end) throw DomainError("time outside trajectory");
  auto it = std::upper_bound(traj.segments.begin(), traj.segments.end(), t,
                             [](double v, const Segment& s) { return v < s.t_start; });
  const Segment& s = *std::prev(it);
  const FlowResult r = flow(traj.spec.mode_spec(s.mode), s.x_start, t - s.t_start);
  if (r.is_blow_up()) return traj.x_end;
  return r.x;
}

double time_fraction_minus(const Trajectory& traj) {
  double minus = 0.0;
  double total = 0.0;
  for (const auto& s : traj.segments) {
    total += s.duration;
    if (s.mode == Mode::Minus) minus += s.duration;
  }
  return total > 0.0 ? minus / total : 0.0;
}

std::optional<double> first_passage(const Trajectory& traj, double level, bool above) {
  auto hit = [&](const FlowResult& r) {
    if (r.is_blow_up()) return above ? r.direction == Direction::Up : r.direction == Direction::Down;
    return above ? r.x >= level : r.x <= level;
  };
  for (const auto& s : traj.segments) {
    if (hit(FlowResult::value(s.x_start))) return s.t_start;
    const NormalFormSpec nf = traj.spec.mode_spec(s.mode);
    if (hit(flow(nf, s.x_start, s.duration))) {
      return s.t_start + bisect_crossing(nf, s.x_start, s.duration, hit);
    }
    // A blow-up segment ends at the escape time, where flow() reports BlowUp.
  }
  return std::nullopt;
}

double PlanarTrajectory::theta_at(double t) const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double th = std::fmod(theta0 + t, two_pi);
  if (th < 0.0) th += two_pi;
  return th;
}

PlanarTrajectory hopf_simulate(const SwitchingSpec& spec, double theta0, double r0, Mode i0,
                               const StopCondition& stop, std::uint64_t seed) {
  if (!is_hopf_radial(spec.kind)) throw ValidationError("hopf_simulate needs a Hopf radial kind");
  if (!(r0 > 0.0)) throw DomainError("r0 must be > 0");
  if (!std::isfinite(theta0)) throw DomainError("theta0 must be finite");
  PlanarTrajectory out;
  out.radial = simulate(spec, r0, i0, stop, seed);
  out.theta0 = theta0;
  out.theta0 = out.theta_at(0.0);  // reduce to [0, 2pi)
  return out;
}

}  // namespace pdmp
