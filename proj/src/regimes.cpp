// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/regimes.hpp"

#include <cmath>
#include <numeric>

#include "pdmp/error.hpp"

namespace pdmp {

std::string_view to_string(Comparison c) {
  switch (c) {
    case Comparison::Sub: return "sub";
    case Comparison::Critical: return "critical";
    case Comparison::Super: return "super";
  }
  return "unknown";
}

std::string_view to_string(ErgodicMeasure m) {
  switch (m) {
    case ErgodicMeasure::TrivialDelta: return "trivial_delta";
    case ErgodicMeasure::MuPositive: return "mu_positive";
    case ErgodicMeasure::PiNegative: return "pi_negative";
    case ErgodicMeasure::MuProduct: return "mu_product";
  }
  return "unknown";
}

std::string_view to_string(BlowUp b) {
  switch (b) {
    case BlowUp::None: return "none";
    case BlowUp::PositiveProbability: return "positive_probability";
    case BlowUp::AlmostSure: return "almost_sure";
    case BlowUp::AlmostSureFromLeftOfZero: return "almost_sure_from_left_of_zero";
    case BlowUp::Dichotomy: return "dichotomy";
    case BlowUp::NotCovered: return "not_covered";
  }
  return "unknown";
}

double average_growth_rate(double p_minus, double p_plus, double lambda_minus,
                           double lambda_plus) {
  return (p_minus * lambda_plus + p_plus * lambda_minus) / (lambda_plus + lambda_minus);
}

Comparison compare_rates(const SwitchingSpec& spec) {
  const double a = spec.lambda_minus * spec.p_plus;
  const double b = spec.lambda_plus * spec.p_minus;
  const double s = a + b;
  if (std::fabs(s) <= 1e-12 * (std::fabs(a) + std::fabs(b))) return Comparison::Critical;
  return s > 0.0 ? Comparison::Super : Comparison::Sub;
}

RegimeReport classify(const SwitchingSpec& spec) {
  spec.validate();
  RegimeReport rep;
  rep.spec = spec;
  rep.growth_rate =
      average_growth_rate(spec.p_minus, spec.p_plus, spec.lambda_minus, spec.lambda_plus);
  rep.comparison = compare_rates(spec);
  const bool super = rep.comparison == Comparison::Super;
  const bool critical = rep.comparison == Comparison::Critical;
  using E = ErgodicMeasure;

  switch (spec.kind) {
    case NormalFormKind::SupPitchfork:
      rep.blowup = BlowUp::None;
      if (super) {
        rep.ergodic_ipms = {E::TrivialDelta, E::MuPositive, E::PiNegative};
        rep.notes = "three ergodic IPMs; mu and pi have explicit densities on (0,sqrt(p+)) and "
                    "(-sqrt(p+),0)";
      } else {
        rep.ergodic_ipms = {E::TrivialDelta};
        rep.notes = critical ? "critical threshold: delta is the unique IPM (densities would "
                               "behave like 1/x at 0)"
                             : "delta is the unique IPM; trajectories converge to 0";
      }
      break;
    case NormalFormKind::SupHopfRadial:
      rep.blowup = BlowUp::None;
      if (super) {
        rep.ergodic_ipms = {E::TrivialDelta, E::MuProduct};
        rep.notes = "two ergodic IPMs; the nontrivial one is uniform in angle times the "
                    "pitchfork radial measure";
      } else {
        rep.ergodic_ipms = {E::TrivialDelta};
        rep.notes = "delta is the unique IPM";
      }
      break;
    case NormalFormKind::Transcritical:
      if (super) {
        rep.ergodic_ipms = {E::TrivialDelta, E::MuPositive};
        rep.blowup = BlowUp::AlmostSureFromLeftOfZero;
        rep.notes = "two ergodic IPMs on [0,inf); initial laws on (-inf,0) blow up to -inf "
                    "almost surely";
      } else {
        rep.ergodic_ipms = {E::TrivialDelta};
        if (critical) {
          rep.blowup = BlowUp::NotCovered;
          rep.notes = "delta is the only IPM; blow-up from the left of 0 has positive "
                      "probability, almost-sure behavior at the critical threshold is "
                      "indeterminate (not covered)";
        } else {
          rep.blowup = BlowUp::Dichotomy;
          rep.notes = "delta is the only IPM; from initial laws charging (p-,0) the path "
                      "either blows up to -inf or converges to 0, both with positive "
                      "probability";
        }
      }
      break;
    case NormalFormKind::SubPitchfork:
    case NormalFormKind::SubHopfRadial:
      rep.ergodic_ipms = {E::TrivialDelta};
      if (super) {
        rep.blowup = BlowUp::AlmostSure;
        rep.notes = "delta is the unique IPM of the stopped model; every path started off 0 "
                    "escapes to infinity almost surely";
      } else if (critical) {
        rep.blowup = BlowUp::NotCovered;
        rep.notes = "delta is the unique IPM of the stopped model; escape has positive "
                    "probability, almost-sure behavior at the critical threshold is "
                    "indeterminate (not covered)";
      } else {
        rep.blowup = BlowUp::Dichotomy;
        rep.notes = "delta is the unique IPM of the stopped model; from initial laws "
                    "charging (0,sqrt(-p-)) the path either escapes or converges to 0";
      }
      break;
    case NormalFormKind::Fold:
      rep.blowup = BlowUp::AlmostSure;
      rep.notes = "no common equilibrium; every path diverges to -inf in finite time almost "
                  "surely, for all rates";
      break;
  }
  return rep;
}

GrowthEstimate lyapunov_estimate(const SwitchingSpec& spec, const LyapunovOptions& opts) {
  spec.validate();
  if (!has_zero_equilibrium(spec.kind))
    throw DomainError("growth rate at 0 needs a common equilibrium at 0");
  if (!(opts.horizon > 0.0)) throw ValidationError("horizon must be > 0");
  if (opts.runs < 2) throw ValidationError("lyapunov_estimate needs at least 2 runs");
  const double guard = opts.guard > 0.0 ? opts.guard
                       : spec.kind == NormalFormKind::Transcritical
                           ? 0.01 * spec.p_plus
                           : 0.1 * std::sqrt(spec.p_plus);
  if (!(opts.x0 > opts.floor && opts.x0 < guard))
    throw ValidationError("x0 must lie strictly between floor and the nonlinearity guard");

  std::vector<double> per_run(opts.runs, 0.0);
  std::size_t pieces = 0;
  for (std::size_t r = 0; r < opts.runs; ++r) {
    Rng rng(derive_seed(opts.seed, r));
    Mode mode = rng.uniform_open() < spec.stationary_weight(Mode::Minus) ? Mode::Minus : Mode::Plus;
    double x = opts.x0;
    double log_growth = 0.0;
    double t = 0.0;
    ++pieces;
    while (t < opts.horizon) {
      const double d = std::min(sample_switch_time(spec.rate(mode), rng), opts.horizon - t);
      const NormalFormSpec nf = spec.mode_spec(mode);
      double left = d;
      while (left > 0.0) {
        const FlowResult end = flow(nf, x, left);
        if (end.is_blow_up() || end.x >= guard) {
          // Leave the linear regime: close this piece at the guard and restart.
          double lo = 0.0;
          double hi = end.is_blow_up() ? end.t_star : left;
          for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const FlowResult m = flow(nf, x, mid);
            (m.is_blow_up() || m.x >= guard ? hi : lo) = mid;
          }
          log_growth += std::log(guard / x);
          left -= hi;
          x = opts.x0;
          ++pieces;
          continue;
        }
        if (end.x == 0.0) {
          // Below the underflow clamp the flow is linear to machine precision.
          log_growth += nf.p * left;
          x = opts.x0;
          ++pieces;
        } else {
          log_growth += std::log(end.x / x);
          x = end.x;
          if (x < opts.floor) {
            x = opts.x0;
            ++pieces;
          }
        }
        left = 0.0;
      }
      t += d;
      mode = flip(mode);
    }
    per_run[r] = log_growth / opts.horizon;
  }
  if (pieces < 10) throw ValidationError("fewer than 10 usable linear-regime pieces");

  const double n = static_cast<double>(opts.runs);
  const double mean = std::accumulate(per_run.begin(), per_run.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : per_run) ss += (v - mean) * (v - mean);
  GrowthEstimate est;
  est.lambda_hat = mean;
  est.std_err = std::sqrt(ss / (n - 1.0) / n);
  est.samples_used = pieces;
  est.runs = opts.runs;
  return est;
}

BlowupSummary blowup_fraction(std::span<const Trajectory> ensemble) {
  if (ensemble.empty()) throw ValidationError("blowup_fraction of an empty ensemble");
  BlowupSummary out;
  out.runs = ensemble.size();
  for (const auto& tr : ensemble)
    if (tr.blew_up()) out.times.push_back(tr.status.t_end);
  out.fraction = static_cast<double>(out.times.size()) / static_cast<double>(ensemble.size());
  return out;
}

}  // namespace pdmp
