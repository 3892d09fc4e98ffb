// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "pdmp/error.hpp"

namespace pdmp::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename temp file onto " + path);
  }
}

std::string_view status_name(TrajectoryStatus::Kind k) {
  switch (k) {
    case TrajectoryStatus::Kind::HorizonReached: return "horizon_reached";
    case TrajectoryStatus::Kind::BlewUp: return "blew_up";
    case TrajectoryStatus::Kind::Absorbed: return "absorbed";
  }
  return "unknown";
}

std::string_view direction_name(Direction d) { return d == Direction::Up ? "up" : "down"; }

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t_start,x_start,mode,duration\n";
  for (const Segment& s : traj.segments) {
    out += format_double(s.t_start);
    out += ',';
    out += format_double(s.x_start);
    out += ',';
    out += std::to_string(to_int(s.mode));
    out += ',';
    out += format_double(s.duration);
    out += '\n';
  }
  out += "# status=";
  out += status_name(traj.status.kind);
  out += " t_end=" + format_double(traj.status.t_end);
  out += " x_end=" + format_double(traj.x_end);
  out += " direction=";
  out += traj.blew_up() ? direction_name(traj.status.direction) : "none";
  out += " seed=" + std::to_string(traj.seed) + "\n";
  return out;
}

nlohmann::ordered_json spec_json(const SwitchingSpec& spec) {
  return {{"kind", std::string(to_string(spec.kind))},
          {"pMinus", spec.p_minus},
          {"pPlus", spec.p_plus},
          {"lambdaMinus", spec.lambda_minus},
          {"lambdaPlus", spec.lambda_plus}};
}

nlohmann::ordered_json regime_json(const RegimeReport& rep) {
  nlohmann::ordered_json ipms = nlohmann::ordered_json::array();
  for (ErgodicMeasure m : rep.ergodic_ipms) ipms.push_back(std::string(to_string(m)));
  return {{"kind", std::string(to_string(rep.spec.kind))},
          {"spec", spec_json(rep.spec)},
          {"growthRate", rep.growth_rate},
          {"comparison", std::string(to_string(rep.comparison))},
          {"ergodicIPMs", ipms},
          {"blowup", std::string(to_string(rep.blowup))},
          {"notes", rep.notes}};
}

nlohmann::ordered_json ensemble_summary_json(std::span<const Trajectory> ensemble,
                                             std::uint64_t base_seed) {
  std::size_t horizon = 0, up = 0, down = 0, absorbed = 0;
  std::vector<double> blow_times;
  for (const auto& tr : ensemble) {
    switch (tr.status.kind) {
      case TrajectoryStatus::Kind::HorizonReached: ++horizon; break;
      case TrajectoryStatus::Kind::Absorbed: ++absorbed; break;
      case TrajectoryStatus::Kind::BlewUp:
        (tr.status.direction == Direction::Up ? up : down) += 1;
        blow_times.push_back(tr.status.t_end);
        break;
    }
  }
  const double n = static_cast<double>(ensemble.size());
  const double frac = ensemble.empty() ? 0.0 : static_cast<double>(up + down) / n;
  nlohmann::ordered_json out;
  out["runs"] = ensemble.size();
  out["seed"] = base_seed;
  if (!ensemble.empty()) out["spec"] = spec_json(ensemble.front().spec);
  out["horizonReached"] = horizon;
  out["absorbed"] = absorbed;
  out["blewUp"] = up + down;
  out["blewUpUp"] = up;
  out["blewUpDown"] = down;
  out["blowupFraction"] = frac;
  out["blowupFractionStdErr"] = ensemble.empty() ? 0.0 : std::sqrt(frac * (1.0 - frac) / n);
  out["blowupTimes"] = blow_times;
  return out;
}

std::string density_table_csv(const DensityModel& model, std::size_t n) {
  if (n < 2) throw ValidationError("density grid needs at least 2 points");
  const double b = model.support_end();
  std::string out = "x,rho_minus,rho_plus,rho_marginal\n";
  for (std::size_t k = 0; k < n; ++k) {
    const double x = b * static_cast<double>(k) / static_cast<double>(n - 1);
    const double rm = model.density(Mode::Minus, x);
    const double rp = model.density(Mode::Plus, x);
    out += format_double(x) + ',' + format_double(rm) + ',' + format_double(rp) + ',' +
           format_double(rm + rp) + '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& hist) {
  const auto dm = hist.density(ModeSelector::Minus);
  const auto dp = hist.density(ModeSelector::Plus);
  std::string out = "x_center,rho_minus,rho_plus,rho_marginal\n";
  for (std::size_t k = 0; k < hist.bins; ++k)
    out += format_double(hist.bin_center(k)) + ',' + format_double(dm[k]) + ',' +
           format_double(dp[k]) + ',' + format_double(dm[k] + dp[k]) + '\n';
  return out;
}

std::string general_trajectory_csv(const apps::GeneralTrajectory& traj) {
  const std::size_t d = traj.x_end.size();
  std::string out = "t";
  for (std::size_t i = 0; i < d; ++i) out += ",x" + std::to_string(i);
  out += ",mode\n";
  for (const auto& s : traj.records) {
    out += format_double(s.t);
    for (double v : s.x) out += ',' + format_double(v);
    out += ',' + std::to_string(to_int(s.mode)) + '\n';
  }
  return out;
}

}  // namespace pdmp::io
