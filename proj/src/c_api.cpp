// Copyright 2026 The pdmp-switch Authors
// SPDX-License-Identifier: Apache-2.0

#include "pdmp/pdmp.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "pdmp/applications.hpp"
#include "pdmp/densities.hpp"
#include "pdmp/error.hpp"
#include "pdmp/io.hpp"
#include "pdmp/occupation.hpp"
#include "pdmp/regimes.hpp"

struct pdmp_trajectory {
  pdmp::Trajectory traj;
};

struct pdmp_ensemble {
  std::uint64_t seed = 0;
  std::vector<pdmp_trajectory> runs;
};

struct pdmp_histogram {
  pdmp::Histogram hist;
};

struct pdmp_density {
  explicit pdmp_density(const pdmp::SwitchingSpec& s, double tol) : model(s, tol) {}
  pdmp::DensityModel model;
};

struct pdmp_planar {
  pdmp_trajectory radial;
  double theta0 = 0.0;
};

struct pdmp_general_trajectory {
  pdmp::apps::GeneralTrajectory traj;
};

namespace {

thread_local std::string g_last_error;

pdmp_status fail(pdmp_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
pdmp_status guarded(F&& body) {
  try {
    body();
    return PDMP_OK;
  } catch (const pdmp::DomainError& e) {
    return fail(PDMP_ERR_DOMAIN, e.what());
  } catch (const pdmp::RegimeError& e) {
    return fail(PDMP_ERR_REGIME, e.what());
  } catch (const pdmp::NumericError& e) {
    return fail(PDMP_ERR_NUMERIC, e.what());
  } catch (const pdmp::IoError& e) {
    return fail(PDMP_ERR_IO, e.what());
  } catch (const pdmp::ValidationError& e) {
    return fail(PDMP_ERR_INVALID_ARG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PDMP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PDMP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PDMP_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw pdmp::ValidationError(std::string(what) + " must not be NULL");
}

pdmp::NormalFormKind to_kind(pdmp_kind k) {
  switch (k) {
    case PDMP_SUP_PITCHFORK: return pdmp::NormalFormKind::SupPitchfork;
    case PDMP_SUB_PITCHFORK: return pdmp::NormalFormKind::SubPitchfork;
    case PDMP_TRANSCRITICAL: return pdmp::NormalFormKind::Transcritical;
    case PDMP_FOLD: return pdmp::NormalFormKind::Fold;
    case PDMP_SUP_HOPF: return pdmp::NormalFormKind::SupHopfRadial;
    case PDMP_SUB_HOPF: return pdmp::NormalFormKind::SubHopfRadial;
  }
  throw pdmp::ValidationError("unknown normal form kind " + std::to_string(static_cast<int>(k)));
}

pdmp_kind from_kind(pdmp::NormalFormKind k) {
  switch (k) {
    case pdmp::NormalFormKind::SupPitchfork: return PDMP_SUP_PITCHFORK;
    case pdmp::NormalFormKind::SubPitchfork: return PDMP_SUB_PITCHFORK;
    case pdmp::NormalFormKind::Transcritical: return PDMP_TRANSCRITICAL;
    case pdmp::NormalFormKind::Fold: return PDMP_FOLD;
    case pdmp::NormalFormKind::SupHopfRadial: return PDMP_SUP_HOPF;
    case pdmp::NormalFormKind::SubHopfRadial: return PDMP_SUB_HOPF;
  }
  return PDMP_SUP_PITCHFORK;
}

pdmp::SwitchingSpec to_spec(const pdmp_switching_spec* s) {
  require(s, "spec");
  pdmp::SwitchingSpec out{to_kind(s->kind), s->p_minus, s->p_plus, s->lambda_minus,
                          s->lambda_plus};
  out.validate();
  return out;
}

pdmp::StopCondition to_stop(const pdmp_stop* s) {
  require(s, "stop");
  return {s->horizon, s->blowup_guard, s->absorption_guard};
}

pdmp::ModeSelector to_selector(int sel) {
  switch (sel) {
    case PDMP_SEL_MINUS: return pdmp::ModeSelector::Minus;
    case PDMP_SEL_PLUS: return pdmp::ModeSelector::Plus;
    case PDMP_SEL_MARGINAL: return pdmp::ModeSelector::Marginal;
    default: throw pdmp::ValidationError("selector must be -1, 0 or +1");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  require(out, "output pointer");
  *out = dup_string(s);
}

void fill_info(const pdmp::Trajectory& t, pdmp_trajectory_info* out) {
  using K = pdmp::TrajectoryStatus::Kind;
  out->status = t.status.kind == K::HorizonReached ? PDMP_HORIZON_REACHED
                : t.status.kind == K::BlewUp       ? PDMP_BLEW_UP
                                                   : PDMP_ABSORBED;
  out->t_end = t.status.t_end;
  out->x_end = t.x_end;
  out->direction = t.blew_up() ? static_cast<int>(t.status.direction) : 0;
  out->segments = t.segments.size();
  out->seed = t.seed;
  out->has_guard_time = t.guard_time.has_value() ? 1 : 0;
  out->guard_time = t.guard_time.value_or(0.0);
}

}  // namespace

extern "C" {

const char* pdmp_version(void) { return "1.0.0"; }

const char* pdmp_last_error(void) { return g_last_error.c_str(); }

void pdmp_string_free(char* s) { std::free(s); }

pdmp_status pdmp_kind_from_name(const char* name, pdmp_kind* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto k = pdmp::parse_kind(name);
    if (!k) throw pdmp::ValidationError(std::string("unknown kind '") + name + "'");
    *out = from_kind(*k);
  });
}

const char* pdmp_kind_name(pdmp_kind kind) {
  switch (kind) {
    case PDMP_SUP_PITCHFORK: return "sup-pitchfork";
    case PDMP_SUB_PITCHFORK: return "sub-pitchfork";
    case PDMP_TRANSCRITICAL: return "transcritical";
    case PDMP_FOLD: return "fold";
    case PDMP_SUP_HOPF: return "sup-hopf";
    case PDMP_SUB_HOPF: return "sub-hopf";
  }
  return nullptr;
}

void pdmp_stop_default(pdmp_stop* stop) {
  if (stop == nullptr) return;
  const pdmp::StopCondition d;
  *stop = {d.horizon, d.blowup_guard, d.absorption_guard};
}

// ---- normal forms ----

pdmp_status pdmp_eval_field(pdmp_kind kind, double p, double x, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = pdmp::eval_field({to_kind(kind), p}, x);
  });
}

pdmp_status pdmp_flow(pdmp_kind kind, double p, double x0, double t, pdmp_flow_result* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = pdmp::flow({to_kind(kind), p}, x0, t);
    out->blew_up = r.is_blow_up() ? 1 : 0;
    out->x = r.is_value() ? r.x : 0.0;
    out->t_star = r.is_blow_up() ? r.t_star : 0.0;
    out->direction = r.is_blow_up() ? static_cast<int>(r.direction) : 0;
  });
}

pdmp_status pdmp_blow_up_time(pdmp_kind kind, double p, double x0, int* has_blow_up,
                              double* t_star) {
  return guarded([&] {
    require(has_blow_up, "has_blow_up");
    require(t_star, "t_star");
    const auto t = pdmp::blow_up_time({to_kind(kind), p}, x0);
    *has_blow_up = t ? 1 : 0;
    *t_star = t.value_or(0.0);
  });
}

pdmp_status pdmp_equilibria_json(pdmp_kind kind, double p, char** out_json) {
  return guarded([&] {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : pdmp::equilibria({to_kind(kind), p}))
      arr.push_back({{"x", e.x},
                     {"stability", e.stability == pdmp::Stability::Stable ? "stable" : "unstable"},
                     {"degenerate", e.degenerate}});
    emit(out_json, arr.dump());
  });
}

pdmp_status pdmp_linearize_at_zero(pdmp_kind kind, double p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = pdmp::linearize_at_zero({to_kind(kind), p});
  });
}

// ---- regimes ----

pdmp_status pdmp_average_growth_rate(double p_minus, double p_plus, double lambda_minus,
                                     double lambda_plus, double* out) {
  return guarded([&] {
    require(out, "out");
    if (!(lambda_minus > 0.0 && lambda_plus > 0.0))
      throw pdmp::ValidationError("rates must be > 0");
    *out = pdmp::average_growth_rate(p_minus, p_plus, lambda_minus, lambda_plus);
  });
}

pdmp_status pdmp_classify_json(const pdmp_switching_spec* spec, char** out_json) {
  return guarded([&] { emit(out_json, pdmp::io::regime_json(pdmp::classify(to_spec(spec))).dump(2)); });
}

pdmp_status pdmp_lyapunov_estimate(const pdmp_switching_spec* spec, double x0, double horizon,
                                   size_t runs, uint64_t seed, double guard,
                                   pdmp_growth_estimate* out) {
  return guarded([&] {
    require(out, "out");
    pdmp::LyapunovOptions opts;
    opts.x0 = x0;
    opts.horizon = horizon;
    opts.runs = runs;
    opts.seed = seed;
    opts.guard = guard;
    const auto est = pdmp::lyapunov_estimate(to_spec(spec), opts);
    *out = {est.lambda_hat, est.std_err, est.samples_used, est.runs};
  });
}

// ---- trajectories ----

pdmp_status pdmp_simulate(const pdmp_switching_spec* spec, double x0, int i0,
                          const pdmp_stop* stop, uint64_t seed, pdmp_trajectory** out) {
  return guarded([&] {
    require(out, "out");
    auto t = std::make_unique<pdmp_trajectory>();
    t->traj = pdmp::simulate(to_spec(spec), x0, pdmp::mode_from_int(i0), to_stop(stop), seed);
    *out = t.release();
  });
}

void pdmp_trajectory_free(pdmp_trajectory* traj) { delete traj; }

pdmp_status pdmp_trajectory_info_get(const pdmp_trajectory* traj, pdmp_trajectory_info* out) {
  return guarded([&] {
    require(traj, "trajectory");
    require(out, "out");
    fill_info(traj->traj, out);
  });
}

pdmp_status pdmp_trajectory_segment(const pdmp_trajectory* traj, size_t k, pdmp_segment* out) {
  return guarded([&] {
    require(traj, "trajectory");
    require(out, "out");
    if (k >= traj->traj.segments.size()) throw pdmp::ValidationError("segment index out of range");
    const auto& s = traj->traj.segments[k];
    *out = {s.t_start, s.x_start, pdmp::to_int(s.mode), s.duration};
  });
}

pdmp_status pdmp_trajectory_state_at(const pdmp_trajectory* traj, double t, double* out) {
  return guarded([&] {
    require(traj, "trajectory");
    require(out, "out");
    *out = pdmp::state_at(traj->traj, t);
  });
}

pdmp_status pdmp_trajectory_validate(const pdmp_trajectory* traj) {
  return guarded([&] {
    require(traj, "trajectory");
    pdmp::validate_trajectory(traj->traj);
  });
}

pdmp_status pdmp_trajectory_csv(const pdmp_trajectory* traj, char** out_csv) {
  return guarded([&] {
    require(traj, "trajectory");
    emit(out_csv, pdmp::io::trajectory_csv(traj->traj));
  });
}

// ---- ensembles ----

pdmp_status pdmp_simulate_ensemble(const pdmp_switching_spec* spec, const pdmp_initial* initial,
                                   size_t n_initial, const pdmp_stop* stop, size_t n,
                                   uint64_t base_seed, unsigned threads, pdmp_ensemble** out) {
  return guarded([&] {
    require(out, "out");
    require(initial, "initial");
    if (n_initial == 0) throw pdmp::ValidationError("at least one initial point is required");
    std::vector<pdmp::InitialPoint> pts;
    pts.reserve(n_initial);
    for (size_t k = 0; k < n_initial; ++k)
      pts.push_back({initial[k].x0, pdmp::mode_from_int(initial[k].mode)});
    auto runs = pdmp::simulate_ensemble(to_spec(spec), pts, to_stop(stop), n, base_seed, threads);
    auto ens = std::make_unique<pdmp_ensemble>();
    ens->seed = base_seed;
    ens->runs.reserve(runs.size());
    for (auto& r : runs) ens->runs.push_back({std::move(r)});
    *out = ens.release();
  });
}

void pdmp_ensemble_free(pdmp_ensemble* ens) { delete ens; }

size_t pdmp_ensemble_size(const pdmp_ensemble* ens) { return ens ? ens->runs.size() : 0; }

const pdmp_trajectory* pdmp_ensemble_at(const pdmp_ensemble* ens, size_t k) {
  if (ens == nullptr || k >= ens->runs.size()) return nullptr;
  return &ens->runs[k];
}

namespace {
std::vector<pdmp::Trajectory> copy_runs(const pdmp_ensemble* ens) {
  std::vector<pdmp::Trajectory> v;
  v.reserve(ens->runs.size());
  for (const auto& r : ens->runs) v.push_back(r.traj);
  return v;
}
}  // namespace

pdmp_status pdmp_ensemble_blowup_fraction(const pdmp_ensemble* ens, double* fraction) {
  return guarded([&] {
    require(ens, "ensemble");
    require(fraction, "fraction");
    const auto runs = copy_runs(ens);
    *fraction = pdmp::blowup_fraction(runs).fraction;
  });
}

pdmp_status pdmp_ensemble_summary_json(const pdmp_ensemble* ens, char** out_json) {
  return guarded([&] {
    require(ens, "ensemble");
    const auto runs = copy_runs(ens);
    emit(out_json, pdmp::io::ensemble_summary_json(runs, ens->seed).dump(2));
  });
}

pdmp_status pdmp_uniform_initials(double lo, double hi, size_t n, uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "out");
    if (!(lo < hi)) throw pdmp::ValidationError("uniform initials need lo < hi");
    // Separate stream from the per-run simulation seeds.
    pdmp::Rng rng(pdmp::splitmix64_mix(seed ^ 0x5DEECE66DULL));
    for (size_t k = 0; k < n; ++k) out[k] = lo + (hi - lo) * rng.uniform_open();
  });
}

// ---- histograms ----

pdmp_status pdmp_histogram_from_trajectory(const pdmp_trajectory* traj, size_t bins, double lo,
                                           double hi, double burn_in, double sample_dt,
                                           pdmp_histogram** out) {
  return guarded([&] {
    require(traj, "trajectory");
    require(out, "out");
    const auto& t = traj->traj;
    const double b = burn_in > 0.0 ? burn_in : pdmp::default_burn_in(t.spec);
    const double dt = sample_dt > 0.0 ? sample_dt : pdmp::default_sample_dt(t.spec);
    auto h = std::make_unique<pdmp_histogram>();
    h->hist = pdmp::occupation_histogram(t, bins, lo, hi, b, dt);
    *out = h.release();
  });
}

void pdmp_histogram_free(pdmp_histogram* hist) { delete hist; }

size_t pdmp_histogram_bins(const pdmp_histogram* hist) { return hist ? hist->hist.bins : 0; }

uint64_t pdmp_histogram_total(const pdmp_histogram* hist) { return hist ? hist->hist.total : 0; }

pdmp_status pdmp_histogram_density(const pdmp_histogram* hist, int selector, double* out) {
  return guarded([&] {
    require(hist, "histogram");
    require(out, "out");
    const auto d = hist->hist.density(to_selector(selector));
    std::copy(d.begin(), d.end(), out);
  });
}

pdmp_status pdmp_histogram_mass(const pdmp_histogram* hist, int selector, double* out) {
  return guarded([&] {
    require(hist, "histogram");
    require(out, "out");
    *out = hist->hist.mass(to_selector(selector));
  });
}

pdmp_status pdmp_histogram_csv(const pdmp_histogram* hist, char** out_csv) {
  return guarded([&] {
    require(hist, "histogram");
    emit(out_csv, pdmp::io::histogram_csv(hist->hist));
  });
}

pdmp_status pdmp_ks_uniform(const double* samples, size_t n, double lo, double hi, double* out) {
  return guarded([&] {
    require(samples, "samples");
    require(out, "out");
    *out = pdmp::ks_statistic_uniform(std::vector<double>(samples, samples + n), lo, hi);
  });
}

// ---- densities ----

pdmp_status pdmp_density_create(const pdmp_switching_spec* spec, double tol,
                                pdmp_density** out) {
  return guarded([&] {
    require(out, "out");
    *out = new pdmp_density(to_spec(spec), tol > 0.0 ? tol : 1e-10);
  });
}

void pdmp_density_free(pdmp_density* d) { delete d; }

pdmp_status pdmp_density_info_get(const pdmp_density* d, pdmp_density_info* out) {
  return guarded([&] {
    require(d, "density");
    require(out, "out");
    const auto& m = d->model;
    *out = {m.support_end(),
            m.normalization(),
            m.log_normalization(),
            m.mode_mass(pdmp::Mode::Minus),
            m.mode_mass(pdmp::Mode::Plus),
            m.exponents().x_exp,
            m.exponents().left_exp,
            m.exponents().right_exp,
            m.quadrature_error()};
  });
}

pdmp_status pdmp_density_eval(const pdmp_density* d, int selector, double x, double* out) {
  return guarded([&] {
    require(d, "density");
    require(out, "out");
    switch (to_selector(selector)) {
      case pdmp::ModeSelector::Minus: *out = d->model.density(pdmp::Mode::Minus, x); break;
      case pdmp::ModeSelector::Plus: *out = d->model.density(pdmp::Mode::Plus, x); break;
      case pdmp::ModeSelector::Marginal: *out = d->model.marginal(x); break;
    }
  });
}

pdmp_status pdmp_density_mirror(const pdmp_density* d, int mode, double x, double* out) {
  return guarded([&] {
    require(d, "density");
    require(out, "out");
    *out = d->model.mirror_density(pdmp::mode_from_int(mode), x);
  });
}

pdmp_status pdmp_density_flux(const pdmp_density* d, double x, double* phi_minus,
                              double* phi_plus) {
  return guarded([&] {
    require(d, "density");
    require(phi_minus, "phi_minus");
    require(phi_plus, "phi_plus");
    const auto f = d->model.flux(x);
    *phi_minus = f.phi_minus;
    *phi_plus = f.phi_plus;
  });
}

pdmp_status pdmp_density_fp_residual(const pdmp_density* d, double x, double* r1, double* r2) {
  return guarded([&] {
    require(d, "density");
    require(r1, "r1");
    require(r2, "r2");
    const auto [a, b] = d->model.fokker_planck_residual(x);
    *r1 = a;
    *r2 = b;
  });
}

pdmp_status pdmp_density_l1(const pdmp_density* d, const pdmp_histogram* hist, int selector,
                            double* out) {
  return guarded([&] {
    require(d, "density");
    require(hist, "histogram");
    require(out, "out");
    *out = pdmp::l1_distance(hist->hist, d->model, to_selector(selector));
  });
}

pdmp_status pdmp_density_table_csv(const pdmp_density* d, size_t n, char** out_csv) {
  return guarded([&] {
    require(d, "density");
    emit(out_csv, pdmp::io::density_table_csv(d->model, n));
  });
}

// ---- Hopf ----

pdmp_status pdmp_hopf_simulate(const pdmp_switching_spec* spec, double theta0, double r0,
                               int i0, const pdmp_stop* stop, uint64_t seed,
                               pdmp_planar** out) {
  return guarded([&] {
    require(out, "out");
    auto pt = pdmp::hopf_simulate(to_spec(spec), theta0, r0, pdmp::mode_from_int(i0),
                                  to_stop(stop), seed);
    auto p = std::make_unique<pdmp_planar>();
    p->radial.traj = std::move(pt.radial);
    p->theta0 = pt.theta0;
    *out = p.release();
  });
}

void pdmp_planar_free(pdmp_planar* p) { delete p; }

const pdmp_trajectory* pdmp_planar_radial(const pdmp_planar* p) {
  return p ? &p->radial : nullptr;
}

pdmp_status pdmp_planar_theta_at(const pdmp_planar* p, double t, double* out) {
  return guarded([&] {
    require(p, "planar");
    require(out, "out");
    *out = pdmp::PlanarTrajectory{{}, p->theta0}.theta_at(t);
  });
}

pdmp_status pdmp_planar_angles(const pdmp_planar* p, double burn_in, double dt, double* out,
                               size_t cap, size_t* n_out) {
  return guarded([&] {
    require(p, "planar");
    require(n_out, "n_out");
    const pdmp::PlanarTrajectory view{{}, p->theta0};
    size_t k = 0;
    const size_t n = pdmp::for_each_sample(p->radial.traj, burn_in, dt,
                                           [&](double t, double, pdmp::Mode) {
                                             if (out != nullptr && k < cap)
                                               out[k] = view.theta_at(t);
                                             ++k;
                                           });
    *n_out = n;
  });
}

// ---- applications ----

pdmp_status pdmp_rm_field(double beta, double m, double p, double x, double y, double* dx,
                          double* dy) {
  return guarded([&] {
    require(dx, "dx");
    require(dy, "dy");
    const auto d = pdmp::apps::rm_field({beta, m, p}, {x, y});
    *dx = d[0];
    *dy = d[1];
  });
}

pdmp_status pdmp_rm_coexistence(double p, double* x, double* y) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    const auto e = pdmp::apps::rm_coexistence_equilibrium(p);
    *x = e[0];
    *y = e[1];
  });
}

pdmp_status pdmp_rm_hopf_trace(double p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = pdmp::apps::rm_hopf_trace(p);
  });
}

double pdmp_vdp_fast_field(double p, double x) { return pdmp::apps::vdp_fast_field(p, x); }

void pdmp_vdp_fold_points(double* lo, double* hi) {
  const auto [a, b] = pdmp::apps::vdp_fold_points();
  if (lo) *lo = a;
  if (hi) *hi = b;
}

int pdmp_vdp_equilibrium_count(double p) { return pdmp::apps::vdp_equilibrium_count(p); }

namespace {
pdmp::apps::SwarmParams to_swarm(const pdmp_swarm_params* p) {
  require(p, "params");
  return {p->q, p->w2, p->w3, p->ae, p->de, p->a0, p->d0};
}
}  // namespace

void pdmp_swarm_params_default(pdmp_swarm_params* params) {
  if (params == nullptr) return;
  const pdmp::apps::SwarmParams d;
  *params = {d.q, d.w2, d.w3, d.ae, d.de, d.a0, d.d0};
}

pdmp_status pdmp_swarm_field(const pdmp_swarm_params* params, const double state[5],
                             int symmetrized, const double* verbatim_L, double out[5]) {
  return guarded([&] {
    require(state, "state");
    require(out, "out");
    pdmp::apps::SwarmState s{};
    std::copy(state, state + 5, s.begin());
    std::optional<double> L;
    if (verbatim_L != nullptr) L = *verbatim_L;
    const auto d = pdmp::apps::swarm_field(
        to_swarm(params), s,
        symmetrized ? pdmp::apps::SwarmVariant::Symmetrized : pdmp::apps::SwarmVariant::Verbatim,
        L);
    std::copy(d.begin(), d.end(), out);
  });
}

pdmp_status pdmp_swarm_threshold(double q, double w3, double d0, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = pdmp::apps::swarm_pitchfork_threshold(q, w3, d0);
  });
}

pdmp_status pdmp_swarm_ordered_branch(const pdmp_swarm_params* params, double* x1_plus,
                                      double* x1_minus) {
  return guarded([&] {
    require(x1_plus, "x1_plus");
    require(x1_minus, "x1_minus");
    const auto [a, b] = pdmp::apps::swarm_ordered_branch(to_swarm(params));
    *x1_plus = a;
    *x1_minus = b;
  });
}

pdmp_status pdmp_swarm_steady_state(const pdmp_swarm_params* params, double x1, double out[5]) {
  return guarded([&] {
    require(out, "out");
    const auto s = pdmp::apps::swarm_steady_state(to_swarm(params), x1);
    std::copy(s.begin(), s.end(), out);
  });
}

namespace {
pdmp::apps::VectorField wrap_callback(pdmp_field_fn fn, void* user, const char* which) {
  if (fn == nullptr) throw pdmp::ValidationError(std::string(which) + " must not be NULL");
  return [fn, user, which](std::span<const double> x, std::span<double> dx) {
    const int rc = fn(x.data(), dx.data(), x.size(), user);
    if (rc != 0)
      throw pdmp::DomainError(std::string(which) + " callback returned " + std::to_string(rc));
  };
}

pdmp_general_trajectory* run_general(const pdmp::apps::GeneralSwitchedSpec& gs,
                                     std::span<const double> x0, int i0, double horizon,
                                     double record_dt, uint64_t seed) {
  auto g = std::make_unique<pdmp_general_trajectory>();
  g->traj = pdmp::apps::switched_simulate_general(gs, x0, pdmp::mode_from_int(i0),
                                                  {horizon, record_dt}, seed);
  return g.release();
}
}  // namespace

pdmp_status pdmp_general_simulate(const pdmp_general_spec* spec, const double* x0, int i0,
                                  double horizon, double record_dt, uint64_t seed,
                                  pdmp_general_trajectory** out) {
  return guarded([&] {
    require(spec, "spec");
    require(x0, "x0");
    require(out, "out");
    pdmp::apps::GeneralSwitchedSpec gs;
    gs.field_minus = wrap_callback(spec->field_minus, spec->user, "field_minus");
    gs.field_plus = wrap_callback(spec->field_plus, spec->user, "field_plus");
    gs.lambda_minus = spec->lambda_minus;
    gs.lambda_plus = spec->lambda_plus;
    if (spec->step > 0.0) gs.step = spec->step;
    if (spec->escape_radius > 0.0) gs.escape_radius = spec->escape_radius;
    *out = run_general(gs, {x0, spec->dim}, i0, horizon, record_dt, seed);
  });
}

pdmp_status pdmp_rm_switched_simulate(double p_minus, double p_plus, double lambda_minus,
                                      double lambda_plus, double x0, double y0, int i0,
                                      double horizon, double step, double record_dt,
                                      uint64_t seed, pdmp_general_trajectory** out) {
  return guarded([&] {
    require(out, "out");
    if (!(p_minus > 0.0 && p_plus > 0.0))
      throw pdmp::ValidationError("carrying capacities must be > 0");
    auto field = [](double p) {
      return [p](std::span<const double> s, std::span<double> d) {
        const auto v = pdmp::apps::rm_field({3.0, 1.0, p}, {s[0], s[1]});
        d[0] = v[0];
        d[1] = v[1];
      };
    };
    pdmp::apps::GeneralSwitchedSpec gs;
    gs.field_minus = field(p_minus);
    gs.field_plus = field(p_plus);
    gs.lambda_minus = lambda_minus;
    gs.lambda_plus = lambda_plus;
    if (step > 0.0) gs.step = step;
    const double x[2] = {x0, y0};
    *out = run_general(gs, x, i0, horizon, record_dt, seed);
  });
}

void pdmp_general_free(pdmp_general_trajectory* g) { delete g; }

size_t pdmp_general_dim(const pdmp_general_trajectory* g) { return g ? g->traj.x_end.size() : 0; }

size_t pdmp_general_records(const pdmp_general_trajectory* g) {
  return g ? g->traj.records.size() : 0;
}

pdmp_status pdmp_general_record(const pdmp_general_trajectory* g, size_t k, double* t, double* x,
                                int* mode) {
  return guarded([&] {
    require(g, "trajectory");
    if (k >= g->traj.records.size()) throw pdmp::ValidationError("record index out of range");
    const auto& r = g->traj.records[k];
    if (t) *t = r.t;
    if (x) std::copy(r.x.begin(), r.x.end(), x);
    if (mode) *mode = pdmp::to_int(r.mode);
  });
}

int pdmp_general_escaped(const pdmp_general_trajectory* g) {
  return g && g->traj.status == pdmp::apps::GeneralTrajectory::Status::NumericEscape ? 1 : 0;
}

size_t pdmp_general_switches(const pdmp_general_trajectory* g) {
  return g ? g->traj.switches.size() : 0;
}

pdmp_status pdmp_general_csv(const pdmp_general_trajectory* g, char** out_csv) {
  return guarded([&] {
    require(g, "trajectory");
    emit(out_csv, pdmp::io::general_trajectory_csv(g->traj));
  });
}

// ---- files ----

pdmp_status pdmp_write_file_atomic(const char* path, const char* data, size_t len) {
  return guarded([&] {
    require(path, "path");
    if (len > 0) require(data, "data");
    pdmp::io::write_file_atomic(path, std::string_view(data ? data : "", len));
  });
}

pdmp_status pdmp_format_double(double v, char* buf, size_t cap) {
  return guarded([&] {
    require(buf, "buf");
    const std::string s = pdmp::io::format_double(v);
    if (s.size() + 1 > cap) throw pdmp::ValidationError("buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

}  // extern "C"
