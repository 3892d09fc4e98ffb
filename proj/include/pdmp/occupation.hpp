// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pdmp/engine.hpp"

namespace pdmp {

enum class ModeSelector { Minus, Plus, Marginal };

/// Occupation counts on a uniform grid, split by the chain state. Densities
/// are joint: density(Minus) + density(Plus) == density(Marginal) and the
/// marginal integrates to the in-range sample fraction.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 0;
  std::vector<std::uint64_t> counts_minus;
  std::vector<std::uint64_t> counts_plus;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
  std::uint64_t total = 0;

  Histogram() = default;
  Histogram(std::size_t bins, double lo, double hi);

  double bin_width() const { return (hi - lo) / static_cast<double>(bins); }
  double bin_center(std::size_t k) const { return lo + (static_cast<double>(k) + 0.5) * bin_width(); }
  void add(double x, Mode m);
  std::vector<double> density(ModeSelector sel) const;
  /// Fraction of all samples that fell in range in mode sel.
  double mass(ModeSelector sel) const;
};

/// Default burn-in 100/min(lambda) and sampling step 0.1/max(lambda).
double default_burn_in(const SwitchingSpec& spec);
double default_sample_dt(const SwitchingSpec& spec);

/// Calls visit(t, x, mode) at t = burn_in + k*sample_dt for every such t up to
/// the stopping time, evaluating the exact flow inside each segment.
/// Returns the number of samples.
std::size_t for_each_sample(const Trajectory& traj, double burn_in, double sample_dt,
                            const std::function<void(double, double, Mode)>& visit);

/// Requires a trajectory that reached its horizon and at least 100 samples.
Histogram occupation_histogram(const Trajectory& traj, std::size_t bins, double lo, double hi,
                               double burn_in, double sample_dt);

/// Sup-norm distance between the empirical CDF of samples and the uniform
/// CDF on [lo, hi).
double ks_statistic_uniform(std::vector<double> samples, double lo, double hi);

}  // namespace pdmp
