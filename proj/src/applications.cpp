// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/applications.hpp"

#include <cmath>
#include <sstream>

#include "pdmp/error.hpp"

namespace pdmp::apps {

std::array<double, 2> rm_field(const RMParams& params, std::array<double, 2> state) {
  const auto [x, y] = state;
  if (x < 0.0 || y < 0.0) throw DomainError("Rosenzweig-MacArthur state must be nonnegative");
  const double holling = x * y / (1.0 + x);
  return {x * (1.0 - x / params.p) - holling, params.beta * holling - params.m * y};
}

std::array<double, 2> rm_coexistence_equilibrium(const RMParams& params) {
  if (!(params.beta > params.m && params.m > 0.0))
    throw DomainError("coexistence needs beta > m > 0");
  const double xs = params.m / (params.beta - params.m);
  if (!(params.p > xs))
    throw DomainError("coexistence equilibrium leaves the nonnegative quadrant for p <= x*");
  return {xs, (1.0 - xs / params.p) * (1.0 + xs)};
}

std::array<double, 2> rm_coexistence_equilibrium(double p) {
  return rm_coexistence_equilibrium(RMParams{3.0, 1.0, p});
}

double rm_hopf_trace(double p) {
  const RMParams params{3.0, 1.0, p};
  const auto eq = rm_coexistence_equilibrium(params);
  const VectorField f = [&](std::span<const double> s, std::span<double> out) {
    const auto d = rm_field(params, {s[0], s[1]});
    out[0] = d[0];
    out[1] = d[1];
  };
  const auto jac = numeric_jacobian(f, eq);
  return jac[0][0] + jac[1][1];
}

double vdp_fast_field(double p, double x) { return p - x * x * x / 3.0 + x; }

std::pair<double, double> vdp_fold_points() { return {-2.0 / 3.0, 2.0 / 3.0}; }

int vdp_equilibrium_count(double p) {
  // x^3 - 3x - 3p has discriminant 108 - 243 p^2, zero exactly at |p| = 2/3.
  const double a = std::fabs(p);
  const double fold = 2.0 / 3.0;
  if (a < fold) return 3;
  if (a == fold) return 2;
  return 1;
}

SwarmState swarm_field(const SwarmParams& prm, const SwarmState& s, SwarmVariant variant,
                       std::optional<double> verbatim_L) {
  const auto [x1, x2, y1, y2, y3] = s;
  if (x1 <= 1e-9 || x2 <= 1e-9) throw DomainError("swarm model needs x1, x2 > 1e-9");
  const double q = prm.q, w2 = prm.w2, w3 = prm.w3, ae = prm.ae, de = prm.de;
  const double y3s = y3 * y3;
  const double y3c = y3s * y3;
  const double w3_x = w3 * (y3s / (2.0 * x2) - y3s / (2.0 * x1));

  SwarmState d{};
  double dy1 = 0.0, dy2 = 0.0;
  if (variant == SwarmVariant::Verbatim) {
    if (!verbatim_L)
      throw DomainError("verbatim swarm equations reference the undefined symbol L; "
                        "supply a value or use the symmetrized variant");
    const double L = *verbatim_L;
    d[0] = q * (x1 - x2) + w3_x;
    d[1] = q * (x2 - x1) - w3_x;
    dy1 = q * (y3 - 2.0 * y1) + w2 * (y3 + y3s / L - 2.0 * y3 * y1 / x1) +
          w3 * (y3s / x2 + y3c / (2.0 * x2 * x2) - y3s * y1 / (x1 * x1)) + ae * x1 * x1 - de * y1;
    dy2 = q * (y3 - 2.0 * y2) + w2 * (y3 + y3s / x1 - 2.0 * y3 * y1 / x1) +
          w3 * (y3s / x1 + y3c / (2.0 * x1 * x1) - y3s * y2 / (x2 * x2)) + ae * x2 * x2 - de * y2;
  } else {
    d[0] = q * (x2 - x1) + w3_x;
    d[1] = q * (x1 - x2) - w3_x;
    dy1 = q * (y3 - 2.0 * y1) + w2 * (y3 + y3s / x1 - 2.0 * y3 * y1 / x1) +
          w3 * (y3s / x2 + y3c / (2.0 * x2 * x2) - y3s * y1 / (x1 * x1)) + ae * x1 * x1 - de * y1;
    dy2 = q * (y3 - 2.0 * y2) + w2 * (y3 + y3s / x2 - 2.0 * y3 * y2 / x2) +
          w3 * (y3s / x1 + y3c / (2.0 * x1 * x1) - y3s * y2 / (x2 * x2)) + ae * x2 * x2 - de * y2;
  }
  const double total = prm.a0 * x1 * x2 - prm.d0 * y3 + ae * (x1 * x1 + x2 * x2) - de * (y1 + y2);
  d[2] = dy1;
  d[3] = dy2;
  d[4] = total - dy1 - dy2;
  return d;
}

double swarm_pitchfork_threshold(double q, double w3, double d0) {
  if (!(q > 0.0 && w3 > 0.0 && d0 > 0.0)) throw DomainError("q, w3, d0 must be > 0");
  return 2.0 * d0 * std::sqrt(2.0 * q / w3);
}

std::pair<double, double> swarm_ordered_branch(const SwarmParams& prm) {
  if (prm.ae != 0.0 || prm.de != 0.0)
    throw DomainError("ordered branch formula needs ae = de = 0");
  const double radicand = 1.0 - 8.0 * prm.q * prm.d0 * prm.d0 / (prm.w3 * prm.a0 * prm.a0);
  if (radicand < 0.0) throw DomainError("ordered branch exists only for a0 >= a0*");
  const double r = 0.5 * std::sqrt(radicand);
  return {0.5 + r, 0.5 - r};
}

SwarmState swarm_steady_state(const SwarmParams& prm, double x1) {
  if (prm.ae != 0.0 || prm.de != 0.0) throw DomainError("steady state solver needs ae = de = 0");
  if (!(x1 > 0.0 && x1 < 1.0)) throw DomainError("x1 must lie in (0, 1)");
  const double x2 = 1.0 - x1;
  const double y3 = prm.a0 * x1 * x2 / prm.d0;
  const double y3s = y3 * y3;
  const double q = prm.q, w2 = prm.w2, w3 = prm.w3;
  // y_k' = A_k - B_k y_k with k mirrored between the two link classes.
  auto solve = [&](double xa, double xb) {
    const double num = q * y3 + w2 * (y3 + y3s / xa) + w3 * (y3s / xb + y3s * y3 / (2.0 * xb * xb));
    const double den = 2.0 * q + 2.0 * w2 * y3 / xa + w3 * y3s / (xa * xa);
    return num / den;
  };
  return {x1, x2, solve(x1, x2), solve(x2, x1), y3};
}

void rk4_step(const VectorField& f, std::span<double> x, double h) {
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  f(x, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  f(tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  f(tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  f(tmp, k4);
  for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

GeneralTrajectory switched_simulate_general(const GeneralSwitchedSpec& spec,
                                            std::span<const double> x0, Mode i0,
                                            const GeneralStop& stop, std::uint64_t seed) {
  if (x0.empty()) throw ValidationError("state dimension must be >= 1");
  if (!(spec.step > 0.0)) throw ValidationError("step size must be > 0");
  if (!(spec.lambda_minus > 0.0 && spec.lambda_plus > 0.0))
    throw ValidationError("switching rates must be > 0");
  if (!(stop.horizon > 0.0)) throw ValidationError("horizon must be > 0");
  if (!(stop.record_dt >= 0.0)) throw ValidationError("record_dt must be >= 0");
  if (!spec.field_minus || !spec.field_plus) throw ValidationError("both vector fields are required");

  GeneralTrajectory out;
  out.seed = seed;
  Rng rng(seed);
  std::vector<double> x(x0.begin(), x0.end());
  Mode mode = i0;
  double t = 0.0;
  const bool recording = stop.record_dt > 0.0;
  std::size_t rec_k = 0;
  double next_record = 0.0;
  auto record = [&] {
    out.records.push_back({t, x, mode});
    ++rec_k;
    next_record = static_cast<double>(rec_k) * stop.record_dt;
  };
  out.switches.push_back({t, x, mode});
  if (recording) record();

  for (;;) {
    const VectorField& field = mode == Mode::Minus ? spec.field_minus : spec.field_plus;
    const VectorField guarded = [&](std::span<const double> s, std::span<double> d) {
      try {
        field(s, d);
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "vector field failed at t=" << t << " mode=" << to_int(mode) << " x=(";
        for (std::size_t i = 0; i < s.size(); ++i) msg << (i ? "," : "") << s[i];
        msg << "): " << e.what();
        throw DomainError(msg.str());
      }
    };
    const double hold = sample_switch_time(mode == Mode::Minus ? spec.lambda_minus : spec.lambda_plus, rng);
    const bool last = hold >= stop.horizon - t;
    const double t_switch = last ? stop.horizon : t + hold;
    while (t < t_switch) {
      double t_next = std::min(t + spec.step, t_switch);
      if (recording && next_record > t && next_record < t_next) t_next = next_record;
      rk4_step(guarded, x, t_next - t);
      t = t_next;
      double norm2 = 0.0;
      for (double v : x) norm2 += v * v;
      if (!(std::sqrt(norm2) <= spec.escape_radius)) {
        out.status = GeneralTrajectory::Status::NumericEscape;
        out.t_end = t;
        out.x_end = x;
        return out;
      }
      if (recording && t == next_record) record();
    }
    if (last) break;
    mode = flip(mode);
    out.switches.push_back({t, x, mode});
  }
  out.status = GeneralTrajectory::Status::HorizonReached;
  out.t_end = t;
  out.x_end = x;
  return out;
}

std::vector<std::vector<double>> numeric_jacobian(const VectorField& f,
                                                  std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> fp(n), fm(n);
  std::vector<std::vector<double>> jac(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::fabs(x[j]));
    probe[j] = x[j] + h;
    f(probe, fp);
    probe[j] = x[j] - h;
    f(probe, fm);
    probe[j] = x[j];
    for (std::size_t i = 0; i < n; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
  }
  return jac;
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw DomainError("bisect_root needs a sign change on [a, b]");
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b,
                               std::size_t n, double tol) {
  if (n == 0 || !(b > a)) throw ValidationError("scan_roots needs n >= 1 and a < b");
  std::vector<double> roots;
  double xl = a;
  double fl = f(xl);
  for (std::size_t k = 1; k <= n; ++k) {
    const double xr = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    const double fr = f(xr);
    if (fl == 0.0) {
      roots.push_back(xl);
    } else if (fr != 0.0 && (fl > 0.0) != (fr > 0.0)) {
      roots.push_back(bisect_root(f, xl, xr, tol));
    }
    xl = xr;
    fl = fr;
  }
  if (fl == 0.0) roots.push_back(xl);
  return roots;
}

}  // namespace pdmp::apps
