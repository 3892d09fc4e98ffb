// pdmpsw: command-line front end for libpdmp.
//
// Exit codes: 0 success, 2 invalid input, 3 runtime failure, 4 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdmp/pdmp.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitInvalid = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string msg) { throw CliError{code, std::move(msg)}; }

int exit_code_for(pdmp_status s) {
  switch (s) {
    case PDMP_ERR_IO: return kExitIo;
    case PDMP_ERR_NUMERIC:
    case PDMP_ERR_INTERNAL: return kExitRuntime;
    default: return kExitInvalid;
  }
}

void check(pdmp_status s, const char* what) {
  if (s != PDMP_OK) fail(exit_code_for(s), std::string(what) + ": " + pdmp_last_error());
}

// Owns a malloc'd string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  pdmp_string_free(s);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  pdmp_format_double(v, buf, sizeof buf);
  return buf;
}

void write_out(const std::string& path, const std::string& data) {
  check(pdmp_write_file_atomic(path.c_str(), data.data(), data.size()), path.c_str());
}

// ---- configuration ----

struct Field {
  enum class Type { Real, Int, UInt, Text };
  std::string key;
  std::string flag;
  std::string help;
  Type type;
  double real = 0.0;
  std::int64_t integer = 0;
  std::uint64_t uinteger = 0;
  std::string text;
  std::vector<std::string> choices;
};

class Config {
 public:
  explicit Config(std::string command) : command_(std::move(command)) {}

  const std::string& command() const { return command_; }

  void real(const std::string& key, const std::string& flag, double v, std::string help) {
    add(key, flag, Field::Type::Real, std::move(help)).real = v;
  }
  void integer(const std::string& key, const std::string& flag, std::int64_t v, std::string help) {
    add(key, flag, Field::Type::Int, std::move(help)).integer = v;
  }
  void uinteger(const std::string& key, const std::string& flag, std::uint64_t v,
                std::string help) {
    add(key, flag, Field::Type::UInt, std::move(help)).uinteger = v;
  }
  void text(const std::string& key, const std::string& flag, std::string v, std::string help,
            std::vector<std::string> choices = {}) {
    auto& f = add(key, flag, Field::Type::Text, std::move(help));
    f.text = std::move(v);
    f.choices = std::move(choices);
  }

  double r(const std::string& key) const { return get(key).real; }
  std::int64_t i(const std::string& key) const { return get(key).integer; }
  std::uint64_t u(const std::string& key) const { return get(key).uinteger; }
  const std::string& s(const std::string& key) const { return get(key).text; }

  void bind(CLI::App* app) {
    for (auto& f : fields_) {
      const std::string name = "--" + f.flag;
      switch (f.type) {
        case Field::Type::Real: app->add_option(name, f.real, f.help)->capture_default_str(); break;
        case Field::Type::Int:
          app->add_option(name, f.integer, f.help)->capture_default_str();
          break;
        case Field::Type::UInt:
          app->add_option(name, f.uinteger, f.help)->capture_default_str();
          break;
        case Field::Type::Text: {
          auto* o = app->add_option(name, f.text, f.help)->capture_default_str();
          if (!f.choices.empty()) o->check(CLI::IsMember(f.choices));
          break;
        }
      }
    }
  }

  json dump() const {
    json j;
    j["command"] = command_;
    for (const auto& f : fields_) {
      switch (f.type) {
        case Field::Type::Real: j[f.key] = f.real; break;
        case Field::Type::Int: j[f.key] = f.integer; break;
        case Field::Type::UInt: j[f.key] = f.uinteger; break;
        case Field::Type::Text: j[f.key] = f.text; break;
      }
    }
    return j;
  }

  void load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(kExitIo, "cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(kExitInvalid, path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                             ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) fail(kExitInvalid, path + ": top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      const std::string where = path + ":" + std::to_string(line_of_key(text, key)) +
                                ": field '" + key + "'";
      if (key == "command") {
        if (!value.is_string() || value.get<std::string>() != command_)
          fail(kExitInvalid, where + ": config is for a different command (expected \"" +
                                 command_ + "\")");
        continue;
      }
      Field* f = find(key);
      if (!f) fail(kExitInvalid, where + ": unknown field for command " + command_);
      switch (f->type) {
        case Field::Type::Real:
          if (!value.is_number()) fail(kExitInvalid, where + ": expected a number");
          f->real = value.get<double>();
          break;
        case Field::Type::Int:
          if (!value.is_number_integer()) fail(kExitInvalid, where + ": expected an integer");
          f->integer = value.get<std::int64_t>();
          break;
        case Field::Type::UInt:
          if (!value.is_number_unsigned())
            fail(kExitInvalid, where + ": expected a non-negative integer");
          f->uinteger = value.get<std::uint64_t>();
          break;
        case Field::Type::Text:
          if (!value.is_string()) fail(kExitInvalid, where + ": expected a string");
          f->text = value.get<std::string>();
          if (!f->choices.empty() &&
              std::find(f->choices.begin(), f->choices.end(), f->text) == f->choices.end())
            fail(kExitInvalid, where + ": \"" + f->text + "\" is not one of the allowed values");
          break;
      }
    }
  }

  // Field-precise validation helpers.
  void require_finite(const std::string& key) const {
    if (!std::isfinite(r(key))) invalid(key, "must be finite");
  }
  void require_positive(const std::string& key) const {
    if (!(std::isfinite(r(key)) && r(key) > 0)) invalid(key, "must be positive and finite");
  }
  void require_min(const std::string& key, std::int64_t lo) const {
    if (i(key) < lo) invalid(key, "must be at least " + std::to_string(lo));
  }
  void require_mode(const std::string& key) const {
    if (i(key) != -1 && i(key) != 1) invalid(key, "must be -1 or 1");
  }
  [[noreturn]] void invalid(const std::string& key, const std::string& why) const {
    fail(kExitInvalid, "invalid value for '" + key + "' (--" + get(key).flag + "): " + why);
  }

 private:
  Field& add(const std::string& key, const std::string& flag, Field::Type t, std::string help) {
    auto& f = fields_.emplace_back();
    f.key = key;
    f.flag = flag;
    f.type = t;
    f.help = std::move(help);
    return f;
  }
  Field* find(const std::string& key) {
    for (auto& f : fields_)
      if (f.key == key) return &f;
    return nullptr;
  }
  const Field& get(const std::string& key) const {
    for (const auto& f : fields_)
      if (f.key == key) return f;
    throw std::logic_error("no config field " + key);
  }
  static std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }
  static std::size_t line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
  }

  std::string command_;
  std::deque<Field> fields_;
};

// ---- shared field groups ----

const std::vector<std::string> kKinds = {"sup-pitchfork", "sub-pitchfork", "transcritical",
                                         "fold",          "sup-hopf",      "sub-hopf"};

void add_spec(Config& c, const std::string& kind = "sup-pitchfork") {
  c.text("kind", "kind", kind, "normal form", kKinds);
  c.real("pMinus", "p-minus", -1.0, "parameter in mode -1");
  c.real("pPlus", "p-plus", 1.0, "parameter in mode +1");
  c.real("lambdaMinus", "lambda-minus", 2.0, "rate of leaving mode -1");
  c.real("lambdaPlus", "lambda-plus", 1.0, "rate of leaving mode +1");
}

void add_stop(Config& c, double horizon) {
  c.real("horizon", "horizon", horizon, "simulation horizon");
  c.real("blowupGuard", "blowup-guard", 1e6, "diagnostic |x| threshold");
  c.real("absorptionGuard", "absorption-guard", 1e-12, "|x| below which a run is absorbed");
}

void add_seed(Config& c) { c.uinteger("seed", "seed", 1, "base seed for all randomness"); }

pdmp_switching_spec spec_of(const Config& c) {
  pdmp_switching_spec s{};
  check(pdmp_kind_from_name(c.s("kind").c_str(), &s.kind), "kind");
  for (const char* k : {"pMinus", "pPlus", "lambdaMinus", "lambdaPlus"}) c.require_finite(k);
  s.p_minus = c.r("pMinus");
  s.p_plus = c.r("pPlus");
  s.lambda_minus = c.r("lambdaMinus");
  s.lambda_plus = c.r("lambdaPlus");
  return s;
}

pdmp_stop stop_of(const Config& c) {
  c.require_positive("horizon");
  c.require_positive("blowupGuard");
  c.require_positive("absorptionGuard");
  return {c.r("horizon"), c.r("blowupGuard"), c.r("absorptionGuard")};
}

json spec_json(const pdmp_switching_spec& s) {
  json j;
  j["kind"] = pdmp_kind_name(s.kind);
  j["pMinus"] = s.p_minus;
  j["pPlus"] = s.p_plus;
  j["lambdaMinus"] = s.lambda_minus;
  j["lambdaPlus"] = s.lambda_plus;
  return j;
}

unsigned threads_from_env() {
  const char* v = std::getenv("PDMP_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || v[0] == '-') fail(kExitInvalid, "PDMP_THREADS must be a non-negative integer");
  return static_cast<unsigned>(n);
}

const char* status_name(int s) {
  switch (s) {
    case PDMP_BLEW_UP: return "blew_up";
    case PDMP_ABSORBED: return "absorbed";
    default: return "horizon_reached";
  }
}

const char* direction_name(int d) { return d > 0 ? "up" : d < 0 ? "down" : "none"; }

// RAII wrappers for library handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using Ensemble = Handle<pdmp_ensemble, pdmp_ensemble_free>;
using Hist = Handle<pdmp_histogram, pdmp_histogram_free>;
using Density = Handle<pdmp_density, pdmp_density_free>;
using Planar = Handle<pdmp_planar, pdmp_planar_free>;
using General = Handle<pdmp_general_trajectory, pdmp_general_free>;

// Density model when the spec admits one, nullopt on a regime mismatch.
bool try_density(const pdmp_switching_spec& s, double tol, Density& d) {
  const auto st = pdmp_density_create(&s, tol, &d.p);
  if (st == PDMP_ERR_REGIME) return false;
  check(st, "density");
  return true;
}

// Histogram block shared by simulate and hopf.
json histogram_block(const pdmp_trajectory* traj, const pdmp_switching_spec& spec,
                     const Config& c, const std::string& hist_out) {
  Density d;
  const bool has_density = try_density(spec, 0.0, d);
  double lo = c.r("histLo"), hi = c.r("histHi");
  if (!(hi > lo)) {
    if (!has_density)
      c.invalid("histHi", "no analytic density for this spec; give --hist-lo < --hist-hi");
    pdmp_density_info info{};
    check(pdmp_density_info_get(d.p, &info), "density");
    lo = 0.0;
    hi = info.support_end;
  }
  Hist h;
  check(pdmp_histogram_from_trajectory(traj, static_cast<size_t>(c.i("bins")), lo, hi,
                                       c.r("burnIn"), c.r("sampleDt"), &h.p),
        "histogram");
  json j;
  j["bins"] = c.i("bins");
  j["lo"] = lo;
  j["hi"] = hi;
  j["samples"] = pdmp_histogram_total(h.p);
  double mm = 0.0, mp = 0.0;
  check(pdmp_histogram_mass(h.p, PDMP_SEL_MINUS, &mm), "histogram");
  check(pdmp_histogram_mass(h.p, PDMP_SEL_PLUS, &mp), "histogram");
  j["massMinus"] = mm;
  j["massPlus"] = mp;
  if (has_density && lo == 0.0) {
    pdmp_density_info info{};
    check(pdmp_density_info_get(d.p, &info), "density");
    if (hi == info.support_end) {
      double l1m = 0, l1 = 0, l1p = 0;
      check(pdmp_density_l1(d.p, h.p, PDMP_SEL_MARGINAL, &l1), "l1");
      check(pdmp_density_l1(d.p, h.p, PDMP_SEL_MINUS, &l1m), "l1");
      check(pdmp_density_l1(d.p, h.p, PDMP_SEL_PLUS, &l1p), "l1");
      j["l1Marginal"] = l1;
      j["l1Minus"] = l1m;
      j["l1Plus"] = l1p;
      j["analyticMassMinus"] = info.mass_minus;
      j["analyticMassPlus"] = info.mass_plus;
    }
  }
  if (!hist_out.empty()) {
    char* csv = nullptr;
    check(pdmp_histogram_csv(h.p, &csv), "histogram");
    write_out(hist_out, take(csv));
    j["out"] = hist_out;
  }
  return j;
}

void add_hist(Config& c, std::int64_t bins) {
  c.integer("bins", "bins", bins, "occupation histogram bins (0 disables)");
  c.real("histLo", "hist-lo", 0.0, "histogram lower edge");
  c.real("histHi", "hist-hi", 0.0, "histogram upper edge (<= lo: analytic support)");
  c.real("burnIn", "burn-in", 0.0, "burn-in before sampling (<= 0: 100/min rate)");
  c.real("sampleDt", "sample-dt", 0.0, "sampling step (<= 0: 0.1/max rate)");
  c.text("histOut", "hist-out", "", "histogram CSV path");
}

// ---- commands ----

json cmd_classify(const Config& c) {
  const auto spec = spec_of(c);
  char* out = nullptr;
  check(pdmp_classify_json(&spec, &out), "classify");
  return json::parse(take(out));
}

json cmd_simulate(const Config& c) {
  const auto spec = spec_of(c);
  const auto stop = stop_of(c);
  c.require_finite("x0");
  c.require_mode("mode");
  c.require_min("runs", 1);
  c.require_min("bins", 0);
  const pdmp_initial init{c.r("x0"), static_cast<int>(c.i("mode"))};
  Ensemble e;
  check(pdmp_simulate_ensemble(&spec, &init, 1, &stop, static_cast<size_t>(c.i("runs")),
                               c.u("seed"), threads_from_env(), &e.p),
        "simulate");
  char* summary = nullptr;
  check(pdmp_ensemble_summary_json(e.p, &summary), "summary");
  json j;
  j["command"] = "simulate";
  j["seed"] = c.u("seed");
  j["spec"] = spec_json(spec);
  j["ensemble"] = json::parse(take(summary));
  j["ensemble"].erase("spec");
  j["ensemble"].erase("blowupTimes");

  const pdmp_trajectory* first = pdmp_ensemble_at(e.p, 0);
  pdmp_trajectory_info info{};
  check(pdmp_trajectory_info_get(first, &info), "trajectory");
  json t;
  t["status"] = status_name(info.status);
  t["tEnd"] = info.t_end;
  t["xEnd"] = info.x_end;
  t["direction"] = direction_name(info.direction);
  t["segments"] = info.segments;
  if (info.has_guard_time) t["guardTime"] = info.guard_time;
  j["first"] = t;

  if (!c.s("out").empty()) {
    char* csv = nullptr;
    check(pdmp_trajectory_csv(first, &csv), "trajectory");
    write_out(c.s("out"), take(csv));
    j["out"] = c.s("out");
  }
  if (c.i("bins") > 0) j["histogram"] = histogram_block(first, spec, c, c.s("histOut"));
  return j;
}

json cmd_density(const Config& c) {
  const auto spec = spec_of(c);
  c.require_min("grid", 2);
  if (!(c.r("tol") > 0 && c.r("tol") < 1)) c.invalid("tol", "must lie in (0, 1)");
  Density d;
  check(pdmp_density_create(&spec, c.r("tol"), &d.p), "density");
  pdmp_density_info info{};
  check(pdmp_density_info_get(d.p, &info), "density");
  json j;
  j["command"] = "density";
  j["spec"] = spec_json(spec);
  j["supportEnd"] = info.support_end;
  j["normalization"] = info.normalization;
  j["logNormalization"] = info.log_normalization;
  j["massMinus"] = info.mass_minus;
  j["massPlus"] = info.mass_plus;
  j["exponents"] = {{"x", info.x_exp}, {"left", info.left_exp}, {"right", info.right_exp}};
  j["quadratureError"] = info.quadrature_error;
  j["grid"] = c.i("grid");
  if (!c.s("out").empty()) {
    char* csv = nullptr;
    check(pdmp_density_table_csv(d.p, static_cast<size_t>(c.i("grid")), &csv), "density");
    write_out(c.s("out"), take(csv));
    j["out"] = c.s("out");
  }
  return j;
}

json cmd_blowup(const Config& c) {
  const auto spec = spec_of(c);
  const auto stop = stop_of(c);
  c.require_mode("mode");
  c.require_min("runs", 1);
  const auto runs = static_cast<size_t>(c.i("runs"));
  const int mode = static_cast<int>(c.i("mode"));
  std::vector<pdmp_initial> init;
  if (c.s("initial") == "point") {
    c.require_finite("x0");
    init.push_back({c.r("x0"), mode});
  } else {
    c.require_finite("x0Lo");
    c.require_finite("x0Hi");
    if (!(c.r("x0Hi") > c.r("x0Lo"))) c.invalid("x0Hi", "must exceed x0-lo");
    std::vector<double> xs(runs);
    check(pdmp_uniform_initials(c.r("x0Lo"), c.r("x0Hi"), runs, c.u("seed"), xs.data()),
          "initials");
    for (double x : xs) init.push_back({x, mode});
  }
  Ensemble e;
  check(pdmp_simulate_ensemble(&spec, init.data(), init.size(), &stop, runs, c.u("seed"),
                               threads_from_env(), &e.p),
        "blowup");
  char* summary = nullptr;
  check(pdmp_ensemble_summary_json(e.p, &summary), "summary");
  json ens = json::parse(take(summary));
  json j;
  j["command"] = "blowup";
  j["seed"] = c.u("seed");
  j["spec"] = spec_json(spec);
  j["initial"] = c.s("initial");
  j["runs"] = runs;
  j["fraction"] = ens["blowupFraction"];
  j["stdErr"] = ens["blowupFractionStdErr"];
  j["blewUpUp"] = ens["blewUpUp"];
  j["blewUpDown"] = ens["blewUpDown"];
  j["absorbed"] = ens["absorbed"];
  j["horizonReached"] = ens["horizonReached"];
  if (!c.s("out").empty()) {
    std::string csv = "run,x0,status,t_end,direction\n";
    for (size_t k = 0; k < runs; ++k) {
      pdmp_trajectory_info info{};
      check(pdmp_trajectory_info_get(pdmp_ensemble_at(e.p, k), &info), "trajectory");
      csv += std::to_string(k) + "," + fmt(init[k % init.size()].x0) + "," +
             status_name(info.status) + "," + fmt(info.t_end) + "," +
             direction_name(info.direction) + "\n";
    }
    write_out(c.s("out"), csv);
    j["out"] = c.s("out");
  }
  return j;
}

json cmd_hopf(const Config& c) {
  const auto spec = spec_of(c);
  if (spec.kind != PDMP_SUP_HOPF && spec.kind != PDMP_SUB_HOPF)
    c.invalid("kind", "must be sup-hopf or sub-hopf");
  const auto stop = stop_of(c);
  c.require_finite("theta0");
  c.require_finite("r0");
  c.require_mode("mode");
  c.require_min("bins", 0);
  Planar pl;
  check(pdmp_hopf_simulate(&spec, c.r("theta0"), c.r("r0"), static_cast<int>(c.i("mode")),
                           &stop, c.u("seed"), &pl.p),
        "hopf");
  const pdmp_trajectory* radial = pdmp_planar_radial(pl.p);
  pdmp_trajectory_info info{};
  check(pdmp_trajectory_info_get(radial, &info), "trajectory");

  double burn = c.r("burnIn"), dt = c.r("sampleDt");
  const double lmin = std::min(spec.lambda_minus, spec.lambda_plus);
  const double lmax = std::max(spec.lambda_minus, spec.lambda_plus);
  if (burn <= 0) burn = 100.0 / lmin;
  if (dt <= 0) dt = 0.1 / lmax;
  size_t n = 0;
  check(pdmp_planar_angles(pl.p, burn, dt, nullptr, 0, &n), "angles");
  std::vector<double> theta(n);
  check(pdmp_planar_angles(pl.p, burn, dt, theta.data(), n, &n), "angles");

  json j;
  j["command"] = "hopf";
  j["seed"] = c.u("seed");
  j["spec"] = spec_json(spec);
  j["status"] = status_name(info.status);
  j["tEnd"] = info.t_end;
  j["angleSamples"] = n;
  if (n > 0) {
    double ks = 0.0;
    check(pdmp_ks_uniform(theta.data(), n, 0.0, 2 * std::numbers::pi, &ks), "ks");
    j["ksUniform"] = ks;
  }
  if (c.i("bins") > 0 && info.status == PDMP_HORIZON_REACHED)
    j["radial"] = histogram_block(radial, spec, c, c.s("histOut"));
  if (!c.s("out").empty()) {
    std::string csv = "t,r,theta\n";
    for (size_t k = 0; k < n; ++k) {
      const double t = burn + static_cast<double>(k) * dt;
      double r = 0.0;
      check(pdmp_trajectory_state_at(radial, t, &r), "state");
      csv += fmt(t) + "," + fmt(r) + "," + fmt(theta[k]) + "\n";
    }
    write_out(c.s("out"), csv);
    j["out"] = c.s("out");
  }
  return j;
}

std::vector<double> grid(const Config& c) {
  c.require_finite("pLo");
  c.require_finite("pHi");
  c.require_min("points", 2);
  if (!(c.r("pHi") > c.r("pLo"))) c.invalid("pHi", "must exceed p-lo");
  const auto n = static_cast<std::size_t>(c.i("points"));
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = c.r("pLo") + (c.r("pHi") - c.r("pLo")) * static_cast<double>(k) /
                            static_cast<double>(n - 1);
  return g;
}

double rm_trace(double p) {
  double v = 0.0;
  check(pdmp_rm_hopf_trace(p, &v), "rm trace");
  return v;
}

json app_rm_scan(const Config& c, std::string& csv) {
  const auto g = grid(c);
  csv = "p,trace\n";
  std::vector<double> tr;
  for (double p : g) {
    tr.push_back(rm_trace(p));
    csv += fmt(p) + "," + fmt(tr.back()) + "\n";
  }
  json roots = json::array();
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    if (tr[k] == 0.0) roots.push_back(g[k]);
    if (tr[k] * tr[k + 1] >= 0.0) continue;
    double a = g[k], b = g[k + 1], fa = tr[k];
    while (b - a > 1e-12) {
      const double m = 0.5 * (a + b), fm = rm_trace(m);
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    roots.push_back(0.5 * (a + b));
  }
  return {{"traceRoots", roots}};
}

json app_vdp(const Config& c, std::string& csv) {
  const auto g = grid(c);
  csv = "p,equilibria\n";
  json counts = {{"1", 0}, {"2", 0}, {"3", 0}};
  for (double p : g) {
    const int n = pdmp_vdp_equilibrium_count(p);
    csv += fmt(p) + "," + std::to_string(n) + "\n";
    counts[std::to_string(n)] = counts[std::to_string(n)].get<int>() + 1;
  }
  double lo = 0, hi = 0;
  pdmp_vdp_fold_points(&lo, &hi);
  return {{"foldPoints", {lo, hi}}, {"equilibriumCounts", counts}};
}

json app_swarm(const Config& c, std::string& csv) {
  pdmp_swarm_params prm{};
  pdmp_swarm_params_default(&prm);
  prm.q = c.r("q");
  prm.w3 = c.r("w3");
  prm.d0 = c.r("d0");
  double a0s = 0.0;
  check(pdmp_swarm_threshold(prm.q, prm.w3, prm.d0, &a0s), "swarm threshold");
  const auto g = grid(c);
  csv = "a0,x1_plus,x1_minus\n";
  for (double a0 : g) {
    prm.a0 = a0;
    double xp = 0.5, xm = 0.5;
    if (a0 >= a0s) check(pdmp_swarm_ordered_branch(&prm, &xp, &xm), "swarm branch");
    csv += fmt(a0) + "," + fmt(xp) + "," + fmt(xm) + "\n";
  }
  return {{"threshold", a0s}, {"q", prm.q}, {"w3", prm.w3}, {"d0", prm.d0}};
}

json app_rm_switched(const Config& c, std::string& csv) {
  for (const char* k : {"pMinus", "pPlus", "x0", "y0"}) c.require_finite(k);
  for (const char* k : {"lambdaMinus", "lambdaPlus", "horizon", "step", "recordDt"})
    c.require_positive(k);
  c.require_mode("mode");
  General g;
  check(pdmp_rm_switched_simulate(c.r("pMinus"), c.r("pPlus"), c.r("lambdaMinus"),
                                  c.r("lambdaPlus"), c.r("x0"), c.r("y0"),
                                  static_cast<int>(c.i("mode")), c.r("horizon"), c.r("step"),
                                  c.r("recordDt"), c.u("seed"), &g.p),
        "rm-switched");
  char* out = nullptr;
  check(pdmp_general_csv(g.p, &out), "csv");
  csv = take(out);

  double em[2], ep[2];
  check(pdmp_rm_coexistence(c.r("pMinus"), &em[0], &em[1]), "coexistence");
  check(pdmp_rm_coexistence(c.r("pPlus"), &ep[0], &ep[1]), "coexistence");
  const size_t n = pdmp_general_records(g.p);
  double sum = 0.0;
  size_t cnt = 0;
  for (size_t k = 0; k < n; ++k) {
    double t = 0, x[2];
    int mode = 0;
    check(pdmp_general_record(g.p, k, &t, x, &mode), "record");
    if (t < 0.5 * c.r("horizon")) continue;
    const double* e = mode < 0 ? em : ep;
    sum += std::hypot(x[0] - e[0], x[1] - e[1]);
    ++cnt;
  }
  json j;
  j["records"] = n;
  j["switches"] = pdmp_general_switches(g.p);
  j["escaped"] = pdmp_general_escaped(g.p) != 0;
  j["equilibriumMinus"] = {em[0], em[1]};
  j["equilibriumPlus"] = {ep[0], ep[1]};
  if (cnt > 0) j["meanDistanceLastHalf"] = sum / static_cast<double>(cnt);
  return j;
}

json cmd_app(const Config& c) {
  std::string csv;
  json j;
  j["command"] = "app";
  j["model"] = c.s("model");
  j["seed"] = c.u("seed");
  const auto& m = c.s("model");
  json r = m == "rm-trace-scan" ? app_rm_scan(c, csv)
           : m == "vdp"         ? app_vdp(c, csv)
           : m == "swarm"       ? app_swarm(c, csv)
                                : app_rm_switched(c, csv);
  j.update(r);
  if (!c.s("out").empty()) {
    write_out(c.s("out"), csv);
    j["out"] = c.s("out");
  }
  return j;
}

// ---- command table ----

struct Command {
  std::string name;
  std::string help;
  json (*run)(const Config&);
  Config (*make)();
};

Config make_classify() {
  Config c("classify");
  add_spec(c);
  return c;
}

Config make_simulate() {
  Config c("simulate");
  add_spec(c);
  add_seed(c);
  c.real("x0", "x0", 0.5, "initial state");
  c.integer("mode", "mode", -1, "initial mode (-1 or 1)");
  add_stop(c, 1000.0);
  c.integer("runs", "runs", 1, "ensemble size");
  c.text("out", "out", "", "trajectory CSV path (first run)");
  add_hist(c, 0);
  return c;
}

Config make_density() {
  Config c("density");
  add_spec(c);
  c.integer("grid", "grid", 1000, "number of table rows");
  c.real("tol", "tol", 1e-10, "quadrature tolerance");
  c.text("out", "out", "", "density table CSV path");
  return c;
}

Config make_blowup() {
  Config c("blowup");
  add_spec(c, "transcritical");
  add_seed(c);
  c.text("initial", "initial", "point", "initial distribution", {"point", "uniform"});
  c.real("x0", "x0", -0.4, "initial state for --initial point");
  c.real("x0Lo", "x0-lo", -0.9, "lower end for --initial uniform");
  c.real("x0Hi", "x0-hi", -0.1, "upper end for --initial uniform");
  c.integer("mode", "mode", -1, "initial mode (-1 or 1)");
  c.integer("runs", "runs", 1000, "ensemble size");
  add_stop(c, 1000.0);
  c.text("out", "out", "", "per-run CSV path");
  return c;
}

Config make_hopf() {
  Config c("hopf");
  add_spec(c, "sup-hopf");
  add_seed(c);
  c.real("theta0", "theta0", 0.0, "initial angle");
  c.real("r0", "r0", 0.5, "initial radius");
  c.integer("mode", "mode", -1, "initial mode (-1 or 1)");
  add_stop(c, 1e4);
  add_hist(c, 100);
  c.text("out", "out", "", "angle samples CSV path");
  return c;
}

Config make_app() {
  Config c("app");
  c.text("model", "model", "rm-trace-scan", "application model",
         {"rm-trace-scan", "vdp", "swarm", "rm-switched"});
  add_seed(c);
  c.real("pLo", "p-lo", 1.0, "scan start");
  c.real("pHi", "p-hi", 4.0, "scan end");
  c.integer("points", "points", 301, "scan points");
  c.real("q", "q", 1.0, "swarm: q");
  c.real("w3", "w3", 2.0, "swarm: w3");
  c.real("d0", "d0", 1.0, "swarm: d0");
  c.real("pMinus", "p-minus", 1.5, "rm-switched: carrying capacity in mode -1");
  c.real("pPlus", "p-plus", 2.5, "rm-switched: carrying capacity in mode +1");
  c.real("lambdaMinus", "lambda-minus", 2.0, "rm-switched: rate of leaving mode -1");
  c.real("lambdaPlus", "lambda-plus", 10.0, "rm-switched: rate of leaving mode +1");
  c.real("x0", "x0", 1.0, "rm-switched: initial prey");
  c.real("y0", "y0", 1.0, "rm-switched: initial predator");
  c.integer("mode", "mode", -1, "rm-switched: initial mode");
  c.real("horizon", "horizon", 1e3, "rm-switched: horizon");
  c.real("step", "step", 1e-3, "rm-switched: RK4 step");
  c.real("recordDt", "record-dt", 0.1, "rm-switched: recording interval");
  c.text("out", "out", "", "CSV path");
  return c;
}

const std::vector<Command>& commands() {
  static const std::vector<Command> table = {
      {"classify", "classify a switching spec", cmd_classify, make_classify},
      {"simulate", "simulate trajectories and occupation histograms", cmd_simulate,
       make_simulate},
      {"density", "tabulate the analytic invariant density", cmd_density, make_density},
      {"blowup", "blow-up fractions over an ensemble", cmd_blowup, make_blowup},
      {"hopf", "planar Hopf lift: angle uniformity and radial occupation", cmd_hopf, make_hopf},
      {"app", "application models", cmd_app, make_app},
  };
  return table;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int run(int argc, char** argv) {
  CLI::App app{"Two-mode switching between bifurcation normal forms", "pdmpsw"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pdmp_version());
  auto* dump_app = app.add_subcommand("dump-config", "print the JSON config of a command");
  dump_app->require_subcommand(1);

  struct Slot {
    const Command* cmd;
    Config cfg;
    CLI::App* sub;
    std::string config_path;
    bool dump = false;
    Config dump_cfg;
    CLI::App* dump_sub;
    std::string dump_config_path;
  };
  std::deque<Slot> slots;
  for (const auto& cmd : commands()) {
    auto& s = slots.emplace_back(Slot{&cmd, cmd.make(), nullptr, {}, false, cmd.make(), nullptr, {}});
    s.sub = app.add_subcommand(cmd.name, cmd.help);
    s.cfg.bind(s.sub);
    s.sub->add_option("--config", s.config_path, "JSON config; its values override flags");
    s.sub->add_flag("--dump-config", s.dump, "print the effective config and exit");
    s.dump_sub = dump_app->add_subcommand(cmd.name, cmd.help);
    s.dump_cfg.bind(s.dump_sub);
    s.dump_sub->add_option("--config", s.dump_config_path, "JSON config; its values override flags");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  for (auto& s : slots) {
    if (s.dump_sub->parsed()) {
      if (!s.dump_config_path.empty()) s.dump_cfg.load(s.dump_config_path);
      print(s.dump_cfg.dump());
      return 0;
    }
    if (s.sub->parsed()) {
      if (!s.config_path.empty()) s.cfg.load(s.config_path);
      if (s.dump) {
        print(s.cfg.dump());
        return 0;
      }
      print(s.cmd->run(s.cfg));
      return 0;
    }
  }
  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "pdmpsw: error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "pdmpsw: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
