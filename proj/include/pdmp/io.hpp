// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pdmp/applications.hpp"
#include "pdmp/densities.hpp"
#include "pdmp/occupation.hpp"
#include "pdmp/regimes.hpp"

namespace pdmp::io {

/// Shortest decimal string that parses back to the same double
/// ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double v);

/// Writes content to a sibling temp file, then renames it over path.
/// Throws IoError.
void write_file_atomic(const std::string& path, std::string_view content);

std::string_view status_name(TrajectoryStatus::Kind k);
std::string_view direction_name(Direction d);

/// Header t_start,x_start,mode,duration; one row per segment; a trailing
/// comment line "# status=... t_end=... x_end=... direction=... seed=...".
std::string trajectory_csv(const Trajectory& traj);

nlohmann::ordered_json spec_json(const SwitchingSpec& spec);
nlohmann::ordered_json regime_json(const RegimeReport& rep);
nlohmann::ordered_json ensemble_summary_json(std::span<const Trajectory> ensemble,
                                             std::uint64_t base_seed);

/// Columns x,rho_minus,rho_plus,rho_marginal on n points spread uniformly
/// over the closed support [0, b] (endpoint values are 0 by convention).
std::string density_table_csv(const DensityModel& model, std::size_t n);

/// Columns x_center,rho_minus,rho_plus,rho_marginal.
std::string histogram_csv(const Histogram& hist);

/// Columns t,x0..x{d-1},mode over the recorded samples.
std::string general_trajectory_csv(const apps::GeneralTrajectory& traj);

}  // namespace pdmp::io
