#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "pdmp/pdmp.h"

namespace {

const pdmp_switching_spec kSuper{PDMP_SUP_PITCHFORK, -1, 1, 2, 1};

std::string take(char* s) {
  std::string out = s ? s : "";
  pdmp_string_free(s);
  return out;
}

pdmp_stop stop_for(double horizon) {
  pdmp_stop s;
  pdmp_stop_default(&s);
  s.horizon = horizon;
  return s;
}

int linear_minus(const double* x, double* dx, size_t dim, void*) {
  for (size_t i = 0; i < dim; ++i) dx[i] = -x[i];
  return 0;
}

int linear_plus(const double* x, double* dx, size_t dim, void*) {
  for (size_t i = 0; i < dim; ++i) dx[i] = x[i];
  return 0;
}

int failing(const double*, double*, size_t, void*) { return 7; }

}  // namespace

TEST_CASE("kind names and version") {
  CHECK(std::strlen(pdmp_version()) > 0);
  for (int k = 0; k < 6; ++k) {
    pdmp_kind out{};
    REQUIRE(pdmp_kind_from_name(pdmp_kind_name(static_cast<pdmp_kind>(k)), &out) == PDMP_OK);
    CHECK(out == k);
  }
  pdmp_kind out{};
  CHECK(pdmp_kind_from_name("saddle", &out) == PDMP_ERR_INVALID_ARG);
  CHECK(std::string(pdmp_last_error()).find("saddle") != std::string::npos);
  CHECK(pdmp_kind_from_name(nullptr, &out) == PDMP_ERR_INVALID_ARG);
}

TEST_CASE("normal form calls and error codes") {
  double v = 0;
  CHECK(pdmp_eval_field(PDMP_FOLD, -1, 0, &v) == PDMP_OK);
  CHECK(v == -1.0);
  CHECK(pdmp_eval_field(PDMP_SUP_HOPF, 1, -0.1, &v) == PDMP_ERR_DOMAIN);
  CHECK(pdmp_eval_field(PDMP_FOLD, 1, 0, nullptr) == PDMP_ERR_INVALID_ARG);

  pdmp_flow_result r{};
  REQUIRE(pdmp_flow(PDMP_SUB_PITCHFORK, 1, 1, 1, &r) == PDMP_OK);
  CHECK(r.blew_up == 1);
  CHECK(r.direction == 1);
  CHECK(r.t_star == doctest::Approx(std::log(2.0) / 2));
  REQUIRE(pdmp_flow(PDMP_SUP_PITCHFORK, 0, 1, 1.5, &r) == PDMP_OK);
  CHECK(r.blew_up == 0);
  CHECK(r.x == doctest::Approx(0.5));

  int has = 0;
  double ts = 0;
  REQUIRE(pdmp_blow_up_time(PDMP_FOLD, -1, 0, &has, &ts) == PDMP_OK);
  CHECK(has == 1);
  CHECK(ts == doctest::Approx(std::numbers::pi / 2));
  REQUIRE(pdmp_blow_up_time(PDMP_SUP_PITCHFORK, 5, 100, &has, &ts) == PDMP_OK);
  CHECK(has == 0);

  char* js = nullptr;
  REQUIRE(pdmp_equilibria_json(PDMP_SUP_PITCHFORK, 1, &js) == PDMP_OK);
  const auto eq = nlohmann::json::parse(take(js));
  REQUIRE(eq.size() == 3);
  CHECK(eq[0]["x"] == -1.0);
  CHECK(eq[0]["stability"] == "stable");
  CHECK(pdmp_linearize_at_zero(PDMP_FOLD, 1, &v) == PDMP_ERR_DOMAIN);
}

TEST_CASE("classification JSON") {
  double lam = 0;
  REQUIRE(pdmp_average_growth_rate(-2, 1, 1, 3, &lam) == PDMP_OK);
  CHECK(lam == doctest::Approx(-1.25));
  char* js = nullptr;
  REQUIRE(pdmp_classify_json(&kSuper, &js) == PDMP_OK);
  const auto j = nlohmann::json::parse(take(js));
  CHECK(j["ergodicIPMs"].size() == 3);
  CHECK(j["comparison"] == "super");
  const pdmp_switching_spec bad{PDMP_FOLD, 1, 1, 1, 1};
  CHECK(pdmp_classify_json(&bad, &js) == PDMP_ERR_INVALID_ARG);

  pdmp_growth_estimate est{};
  REQUIRE(pdmp_lyapunov_estimate(&kSuper, 1e-6, 200, 20, 5, 0, &est) == PDMP_OK);
  CHECK(est.runs == 20);
  CHECK(std::fabs(est.lambda_hat - 1.0 / 3) <= std::max(3 * est.std_err, 0.053));
  CHECK(pdmp_lyapunov_estimate(&kSuper, 0.5, 200, 20, 5, 0, &est) == PDMP_ERR_INVALID_ARG);
}

TEST_CASE("trajectory handles") {
  const auto stop = stop_for(100);
  pdmp_trajectory* a = nullptr;
  pdmp_trajectory* b = nullptr;
  REQUIRE(pdmp_simulate(&kSuper, 0.5, -1, &stop, 9, &a) == PDMP_OK);
  REQUIRE(pdmp_simulate(&kSuper, 0.5, -1, &stop, 9, &b) == PDMP_OK);
  pdmp_trajectory_info ia{}, ib{};
  REQUIRE(pdmp_trajectory_info_get(a, &ia) == PDMP_OK);
  REQUIRE(pdmp_trajectory_info_get(b, &ib) == PDMP_OK);
  CHECK(ia.status == PDMP_HORIZON_REACHED);
  CHECK(ia.t_end == 100.0);
  CHECK(ia.x_end == ib.x_end);
  CHECK(ia.segments > 10);
  CHECK(pdmp_trajectory_validate(a) == PDMP_OK);

  pdmp_segment seg{};
  REQUIRE(pdmp_trajectory_segment(a, 0, &seg) == PDMP_OK);
  CHECK(seg.t_start == 0.0);
  CHECK(seg.x_start == 0.5);
  CHECK(seg.mode == -1);
  CHECK(pdmp_trajectory_segment(a, ia.segments, &seg) == PDMP_ERR_INVALID_ARG);

  double x = 0;
  REQUIRE(pdmp_trajectory_state_at(a, 0.0, &x) == PDMP_OK);
  CHECK(x == 0.5);
  CHECK(pdmp_trajectory_state_at(a, 1e3, &x) != PDMP_OK);

  char* ca = nullptr;
  char* cb = nullptr;
  REQUIRE(pdmp_trajectory_csv(a, &ca) == PDMP_OK);
  REQUIRE(pdmp_trajectory_csv(b, &cb) == PDMP_OK);
  const auto sa = take(ca), sb = take(cb);
  CHECK(sa == sb);
  CHECK(sa.rfind("t_start,x_start,mode,duration\n", 0) == 0);
  pdmp_trajectory_free(a);
  pdmp_trajectory_free(b);
  pdmp_trajectory_free(nullptr);

  pdmp_stop bad = stop_for(-1);
  CHECK(pdmp_simulate(&kSuper, 0.5, -1, &bad, 1, &a) == PDMP_ERR_INVALID_ARG);
  CHECK(pdmp_simulate(&kSuper, 0.5, 0, &stop, 1, &a) == PDMP_ERR_INVALID_ARG);
  CHECK(pdmp_simulate(nullptr, 0.5, -1, &stop, 1, &a) == PDMP_ERR_INVALID_ARG);
}

TEST_CASE("ensembles do not depend on the thread count") {
  const pdmp_switching_spec spec{PDMP_TRANSCRITICAL, -1, 1, 1, 3};
  const pdmp_initial init{-0.4, -1};
  const auto stop = stop_for(1e3);
  pdmp_ensemble* e1 = nullptr;
  pdmp_ensemble* e4 = nullptr;
  REQUIRE(pdmp_simulate_ensemble(&spec, &init, 1, &stop, 400, 11, 1, &e1) == PDMP_OK);
  REQUIRE(pdmp_simulate_ensemble(&spec, &init, 1, &stop, 400, 11, 4, &e4) == PDMP_OK);
  CHECK(pdmp_ensemble_size(e1) == 400);
  char* j1 = nullptr;
  char* j4 = nullptr;
  REQUIRE(pdmp_ensemble_summary_json(e1, &j1) == PDMP_OK);
  REQUIRE(pdmp_ensemble_summary_json(e4, &j4) == PDMP_OK);
  const auto s1 = take(j1);
  CHECK(s1 == take(j4));
  const auto js = nlohmann::json::parse(s1);
  double f = 0;
  REQUIRE(pdmp_ensemble_blowup_fraction(e1, &f) == PDMP_OK);
  CHECK(js["blowupFraction"] == f);
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  CHECK(pdmp_ensemble_at(e1, 400) == nullptr);
  pdmp_ensemble_free(e1);
  pdmp_ensemble_free(e4);

  std::vector<double> xs(1000);
  REQUIRE(pdmp_uniform_initials(-1, -0.5, xs.size(), 3, xs.data()) == PDMP_OK);
  for (double x : xs) {
    CHECK(x >= -1.0);
    CHECK(x < -0.5);
  }
  CHECK(pdmp_uniform_initials(1, 0, 3, 3, xs.data()) == PDMP_ERR_INVALID_ARG);
}

TEST_CASE("histogram and density handles") {
  const auto stop = stop_for(2e4);
  pdmp_trajectory* t = nullptr;
  REQUIRE(pdmp_simulate(&kSuper, 0.5, -1, &stop, 4, &t) == PDMP_OK);
  pdmp_histogram* h = nullptr;
  REQUIRE(pdmp_histogram_from_trajectory(t, 50, 0, 1, 0, 0, &h) == PDMP_OK);
  CHECK(pdmp_histogram_bins(h) == 50);
  CHECK(pdmp_histogram_total(h) > 0);
  std::vector<double> dens(50);
  REQUIRE(pdmp_histogram_density(h, PDMP_SEL_MARGINAL, dens.data()) == PDMP_OK);
  double integral = 0;
  for (double d : dens) integral += d / 50;
  CHECK(integral == doctest::Approx(1.0));

  pdmp_density* d = nullptr;
  REQUIRE(pdmp_density_create(&kSuper, 0, &d) == PDMP_OK);
  pdmp_density_info info{};
  REQUIRE(pdmp_density_info_get(d, &info) == PDMP_OK);
  CHECK(info.support_end == 1.0);
  CHECK(info.mass_minus == doctest::Approx(1.0 / 3));
  CHECK(info.mass_plus == doctest::Approx(2.0 / 3));
  double l1 = 0;
  REQUIRE(pdmp_density_l1(d, h, PDMP_SEL_MARGINAL, &l1) == PDMP_OK);
  CHECK(l1 < 0.1);

  double pm = 0, pp = 0, r1 = 0, r2 = 0, v = 0, w = 0;
  REQUIRE(pdmp_density_flux(d, 0.5, &pm, &pp) == PDMP_OK);
  CHECK(pm + pp == 0.0);
  REQUIRE(pdmp_density_fp_residual(d, 0.5, &r1, &r2) == PDMP_OK);
  CHECK(std::fabs(r1) < 1e-8);
  REQUIRE(pdmp_density_eval(d, PDMP_SEL_PLUS, 0.3, &v) == PDMP_OK);
  REQUIRE(pdmp_density_mirror(d, 1, -0.3, &w) == PDMP_OK);
  CHECK(v == w);
  CHECK(pdmp_density_flux(d, 1.0, &pm, &pp) == PDMP_ERR_DOMAIN);
  char* csv = nullptr;
  REQUIRE(pdmp_density_table_csv(d, 10, &csv) == PDMP_OK);
  const auto table = take(csv);
  CHECK(std::count(table.begin(), table.end(), '\n') == 11);

  const pdmp_switching_spec crit{PDMP_SUP_PITCHFORK, -1, 1, 1, 1};
  pdmp_density* bad = nullptr;
  CHECK(pdmp_density_create(&crit, 0, &bad) == PDMP_ERR_REGIME);
  CHECK(bad == nullptr);

  pdmp_density_free(d);
  pdmp_histogram_free(h);
  pdmp_trajectory_free(t);
}

TEST_CASE("Hopf lift handles") {
  const pdmp_switching_spec spec{PDMP_SUP_HOPF, -1, 1, 2, 1};
  const auto stop = stop_for(2e3);
  pdmp_planar* p = nullptr;
  REQUIRE(pdmp_hopf_simulate(&spec, 0.25, 0.5, -1, &stop, 2, &p) == PDMP_OK);
  double th = 0;
  REQUIRE(pdmp_planar_theta_at(p, 1.0, &th) == PDMP_OK);
  CHECK(th == doctest::Approx(1.25));
  size_t n = 0;
  REQUIRE(pdmp_planar_angles(p, 100, 0.7, nullptr, 0, &n) == PDMP_OK);
  std::vector<double> a(n);
  REQUIRE(pdmp_planar_angles(p, 100, 0.7, a.data(), n, &n) == PDMP_OK);
  double ks = 1;
  REQUIRE(pdmp_ks_uniform(a.data(), n, 0, 2 * std::numbers::pi, &ks) == PDMP_OK);
  CHECK(ks < 0.05);
  CHECK(pdmp_planar_radial(p) != nullptr);
  pdmp_planar_free(p);
  CHECK(pdmp_hopf_simulate(&spec, 0, -0.5, -1, &stop, 2, &p) == PDMP_ERR_DOMAIN);
}

TEST_CASE("application entry points") {
  double x = 0, y = 0, tr = 0;
  REQUIRE(pdmp_rm_coexistence(2.0, &x, &y) == PDMP_OK);
  CHECK(x == doctest::Approx(0.5));
  REQUIRE(pdmp_rm_hopf_trace(2.0, &tr) == PDMP_OK);
  CHECK(std::fabs(tr) < 1e-4);
  double lo = 0, hi = 0;
  pdmp_vdp_fold_points(&lo, &hi);
  CHECK(lo == -2.0 / 3);
  CHECK(hi == 2.0 / 3);
  CHECK(pdmp_vdp_equilibrium_count(0.0) == 3);
  CHECK(pdmp_vdp_equilibrium_count(1.0) == 1);

  double a0 = 0;
  REQUIRE(pdmp_swarm_threshold(1, 2, 1, &a0) == PDMP_OK);
  CHECK(a0 == doctest::Approx(2.0));
  pdmp_swarm_params prm{};
  pdmp_swarm_params_default(&prm);
  const double state[5] = {0.5, 0.5, 0.1, 0.1, 0.2};
  double out[5];
  CHECK(pdmp_swarm_field(&prm, state, 0, nullptr, out) == PDMP_ERR_DOMAIN);
  const double L = 0.5;
  CHECK(pdmp_swarm_field(&prm, state, 0, &L, out) == PDMP_OK);
  REQUIRE(pdmp_swarm_field(&prm, state, 1, nullptr, out) == PDMP_OK);
  CHECK(out[0] + out[1] == doctest::Approx(0.0));
}

TEST_CASE("general switched ODE through callbacks") {
  const pdmp_general_spec spec{2, linear_minus, linear_plus, nullptr, 1.0, 1.0, 1e-3, 1e6};
  const double x0[2] = {1.0, -1.0};
  pdmp_general_trajectory* g = nullptr;
  REQUIRE(pdmp_general_simulate(&spec, x0, -1, 5.0, 0.5, 3, &g) == PDMP_OK);
  CHECK(pdmp_general_dim(g) == 2);
  CHECK(pdmp_general_records(g) == 11);
  double t = 0, x[2];
  int mode = 0;
  REQUIRE(pdmp_general_record(g, 0, &t, x, &mode) == PDMP_OK);
  CHECK(t == 0.0);
  CHECK(x[0] == 1.0);
  CHECK(mode == -1);
  CHECK(pdmp_general_escaped(g) == 0);
  CHECK(pdmp_general_switches(g) >= 1);
  char* csv = nullptr;
  REQUIRE(pdmp_general_csv(g, &csv) == PDMP_OK);
  CHECK(take(csv).rfind("t,x0,x1,mode\n", 0) == 0);
  pdmp_general_free(g);

  const pdmp_general_spec bad{2, failing, failing, nullptr, 1.0, 1.0, 1e-3, 1e6};
  CHECK(pdmp_general_simulate(&bad, x0, -1, 5.0, 0.5, 3, &g) != PDMP_OK);
  CHECK(std::string(pdmp_last_error()).size() > 0);

  REQUIRE(pdmp_rm_switched_simulate(1.5, 2.5, 2, 10, 1, 1, -1, 50, 1e-3, 0.5, 7, &g) ==
          PDMP_OK);
  CHECK(pdmp_general_records(g) == 101);
  pdmp_general_free(g);
}

TEST_CASE("formatting and files") {
  char buf[64];
  REQUIRE(pdmp_format_double(0.1, buf, sizeof buf) == PDMP_OK);
  CHECK(std::string(buf) == "0.1");
  CHECK(pdmp_format_double(0.1, buf, 2) == PDMP_ERR_INVALID_ARG);
  CHECK(pdmp_write_file_atomic("/nonexistent-dir/x", "a", 1) == PDMP_ERR_IO);
}
