// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdmp/engine.hpp"

namespace pdmp {

/// Position of lambda_+/p_+ relative to -lambda_-/p_-.
/// Super: lambda_+/p_+ < -lambda_-/p_-, equivalently a positive growth rate.
enum class Comparison { Sub, Critical, Super };

enum class ErgodicMeasure {
  TrivialDelta,   // Dirac at 0 times the chain's stationary law
  MuPositive,     // carried by (0, inf) x I
  PiNegative,     // carried by (-inf, 0) x I
  MuProduct,      // uniform angle times the radial measure on (0, inf)
};

enum class BlowUp {
  None,
  PositiveProbability,
  AlmostSure,
  AlmostSureFromLeftOfZero,
  Dichotomy,
  NotCovered,
};

struct RegimeReport {
  SwitchingSpec spec;
  double growth_rate = 0.0;
  Comparison comparison = Comparison::Critical;
  std::vector<ErgodicMeasure> ergodic_ipms;
  BlowUp blowup = BlowUp::None;
  std::string notes;
};

std::string_view to_string(Comparison c);
std::string_view to_string(ErgodicMeasure m);
std::string_view to_string(BlowUp b);

/// Lambda = (p_- lambda_+ + p_+ lambda_-)/(lambda_+ + lambda_-).
double average_growth_rate(double p_minus, double p_plus, double lambda_minus,
                           double lambda_plus);

/// Sign test on the cross-multiplied form lambda_- p_+ + lambda_+ p_-, with
/// relative tolerance 1e-12 for the critical case.
Comparison compare_rates(const SwitchingSpec& spec);

RegimeReport classify(const SwitchingSpec& spec);

struct GrowthEstimate {
  double lambda_hat = 0.0;
  double std_err = 0.0;
  std::size_t samples_used = 0;  // linear-regime pieces across all runs
  std::size_t runs = 0;
};

struct LyapunovOptions {
  double x0 = 1e-6;
  double horizon = 500.0;
  std::size_t runs = 20;
  std::uint64_t seed = 1;
  /// Upper edge of the linear regime; <= 0 selects 0.1*sqrt(p_+) for cubic
  /// kinds and 0.01*p_+ for the transcritical form.
  double guard = 0.0;
  /// Restart level below x0 on the log scale.
  double floor = 1e-200;
};

/// Monte Carlo estimate of the growth rate of log X near the common
/// equilibrium 0. Each run integrates d(log X) exactly along the PDMP and is
/// rescaled back to x0 whenever X leaves [floor, guard].
GrowthEstimate lyapunov_estimate(const SwitchingSpec& spec, const LyapunovOptions& opts);

struct BlowupSummary {
  double fraction = 0.0;
  std::vector<double> times;  // analytic blow-up times of the runs that blew up
  std::size_t runs = 0;
};

BlowupSummary blowup_fraction(std::span<const Trajectory> ensemble);

}  // namespace pdmp
