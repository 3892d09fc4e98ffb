// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/occupation.hpp"

#include <algorithm>
#include <cmath>

#include "pdmp/error.hpp"

namespace pdmp {

Histogram::Histogram(std::size_t bins_, double lo_, double hi_)
    : lo(lo_), hi(hi_), bins(bins_), counts_minus(bins_, 0), counts_plus(bins_, 0) {
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  if (!(hi > lo)) throw ValidationError("histogram range must satisfy lo < hi");
}

void Histogram::add(double x, Mode m) {
  ++total;
  if (x < lo) {
    ++underflow;
    return;
  }
  if (x >= hi) {
    // The upper edge belongs to the last bin.
    if (x > hi) {
      ++overflow;
      return;
    }
  }
  auto k = static_cast<std::size_t>((x - lo) / bin_width());
  k = std::min(k, bins - 1);
  (m == Mode::Minus ? counts_minus : counts_plus)[k] += 1;
}

std::vector<double> Histogram::density(ModeSelector sel) const {
  std::vector<double> out(bins, 0.0);
  if (total == 0) return out;
  const double scale = 1.0 / (static_cast<double>(total) * bin_width());
  for (std::size_t k = 0; k < bins; ++k) {
    std::uint64_t c = 0;
    if (sel != ModeSelector::Plus) c += counts_minus[k];
    if (sel != ModeSelector::Minus) c += counts_plus[k];
    out[k] = static_cast<double>(c) * scale;
  }
  return out;
}

double Histogram::mass(ModeSelector sel) const {
  if (total == 0) return 0.0;
  std::uint64_t c = 0;
  for (std::size_t k = 0; k < bins; ++k) {
    if (sel != ModeSelector::Plus) c += counts_minus[k];
    if (sel != ModeSelector::Minus) c += counts_plus[k];
  }
  return static_cast<double>(c) / static_cast<double>(total);
}

double default_burn_in(const SwitchingSpec& spec) {
  return 100.0 / std::min(spec.lambda_minus, spec.lambda_plus);
}

double default_sample_dt(const SwitchingSpec& spec) {
  return 0.1 / std::max(spec.lambda_minus, spec.lambda_plus);
}

std::size_t for_each_sample(const Trajectory& traj, double burn_in, double sample_dt,
                            const std::function<void(double, double, Mode)>& visit) {
  if (!(sample_dt > 0.0)) throw ValidationError("sample_dt must be > 0");
  if (!(burn_in >= 0.0)) throw ValidationError("burn_in must be >= 0");
  const double t_end = traj.status.t_end;
  const bool include_end = traj.reached_horizon();
  std::size_t k = 0;
  double tk = burn_in;
  for (std::size_t s = 0; s < traj.segments.size(); ++s) {
    const Segment& seg = traj.segments[s];
    const bool last = s + 1 == traj.segments.size();
    const double seg_end = last ? t_end : seg.t_start + seg.duration;
    const NormalFormSpec nf = traj.spec.mode_spec(seg.mode);
    while (tk < seg_end || (last && include_end && tk == seg_end)) {
      if (tk >= seg.t_start) {
        const FlowResult r = flow(nf, seg.x_start, tk - seg.t_start);
        if (!r.is_value()) return k;
        visit(tk, r.x, seg.mode);
      }
      ++k;
      tk = burn_in + static_cast<double>(k) * sample_dt;
    }
  }
  return k;
}

Histogram occupation_histogram(const Trajectory& traj, std::size_t bins, double lo, double hi,
                               double burn_in, double sample_dt) {
  if (!traj.reached_horizon())
    throw ValidationError("occupation histogram needs a trajectory that reached its horizon");
  if (!(traj.status.t_end > burn_in)) throw ValidationError("horizon must exceed burn-in");
  Histogram h(bins, lo, hi);
  for_each_sample(traj, burn_in, sample_dt, [&](double, double x, Mode m) { h.add(x, m); });
  if (h.total < 100)
    throw ValidationError("occupation histogram needs at least 100 samples, got " +
                          std::to_string(h.total));
  return h;
}

double ks_statistic_uniform(std::vector<double> samples, double lo, double hi) {
  if (samples.empty()) throw ValidationError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = std::clamp((samples[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace pdmp
