#pragma once

// JSON scenario files and figure presets. A scenario is a flat object of
// snake_case fields; anything not given falls back to the subcommand default
// (or to the preset, when one is selected). Unknown keys are rejected.

#include "ptosc/core.hpp"
#include "ptosc/omit.hpp"
#include "ptosc/params.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ptosc::scenario {

using nlohmann::json;

namespace detail {

class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidInput(where_ + ": expected a JSON object");
  }

  double num(const char* key, double fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw InvalidInput(where_ + ": '" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvalidInput(where_ + ": '" + key + "' must be finite");
    return d;
  }

  long integer(const char* key, long fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw InvalidInput(where_ + ": '" + key + "' must be an integer");
    return v.get<long>();
  }

  bool flag(const char* key, bool fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw InvalidInput(where_ + ": '" + key + "' must be true or false");
    return v.get<bool>();
  }

  /// A number, or a [re, im] pair.
  cplx complex(const char* key, cplx fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    throw InvalidInput(where_ + ": '" + key + "' must be a number or [re, im]");
  }

  std::vector<double> list(const char* key, std::vector<double> fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array() || v.empty()) throw InvalidInput(where_ + ": '" + key + "' must be a non-empty array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw InvalidInput(where_ + ": '" + key + "' must contain numbers only");
      out.push_back(x.get<double>());
    }
    return out;
  }

  const json* object(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) return nullptr;
    return &j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw InvalidInput(where_ + ": unknown field '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

inline SystemParams read_system(Reader& r, SystemParams d) {
  d.omega_m = r.num("omega_m", d.omega_m);
  d.kappa = r.num("kappa", d.kappa);
  d.gamma = r.num("gamma", d.gamma);
  d.delta = r.num("delta", d.delta);
  d.g_lin = r.num("g_lin", d.g_lin);
  d.n_th = r.num("n_th", d.n_th);
  d.validate();
  return d;
}

inline PtDimerParams read_dimer(Reader& r, PtDimerParams d) {
  d.omega = r.num("omega", d.omega);
  d.gamma_loss = r.num("gamma_loss", d.gamma_loss);
  d.gamma_gain = r.num("gamma_gain", d.gamma_gain);
  d.mu = r.num("mu", d.mu);
  d.n_th_loss = r.num("n_th_loss", d.n_th_loss);
  d.n_th_gain = r.num("n_th_gain", d.n_th_gain);
  d.validate();
  return d;
}

inline void positive(double v, const char* name) { require(v > 0.0, std::string(name) + " must be > 0"); }

}  // namespace detail

enum class Preset { None, Fig2, Fig3, Fig5, Fig6 };

inline Preset parse_preset(const std::string& s) {
  if (s.empty()) return Preset::None;
  if (s == "fig2") return Preset::Fig2;
  if (s == "fig3") return Preset::Fig3;
  if (s == "fig5") return Preset::Fig5;
  if (s == "fig6") return Preset::Fig6;
  throw InvalidInput("unknown preset '" + s + "' (expected fig2, fig3, fig5 or fig6)");
}

inline void require_preset(Preset p, std::initializer_list<Preset> allowed, const char* cmd) {
  if (p == Preset::None) return;
  for (Preset a : allowed)
    if (a == p) return;
  throw InvalidInput(std::string("this preset does not apply to '") + cmd + "'");
}

/// Blue-sideband scenario of the gain figure. The oscillator starts in a
/// coherent state below the bath occupation (see README).
inline SystemParams fig2_system() { return {1.0, 0.1, 1e-5, 3.0, 0.04, 1000.0}; }

inline InitialMoments fig2_initial() {
  InitialMoments in;
  in.b_mean = 10.0;
  in.n_b = 100.0;
  in.bb = 100.0;
  return in;
}

inline PtDimerParams fig6_dimer() { return {1.0, 0.004, 0.004, 0.02, 0.0, 0.0}; }

inline omit::OmitParams fig5_omit() { return {}; }

// --- per-subcommand configurations -------------------------------------------

struct GainSweepConfig {
  SystemParams system = fig2_system();
  double g_min = 0.0;
  double g_max = 0.06;
  long g_points = 121;
  std::vector<double> delta_values{2.0, 2.5, 3.0, 3.5, 4.0};
};

struct EvolveConfig {
  SystemParams system = fig2_system();
  InitialMoments initial = fig2_initial();
  double dt = 0.01;
  double t_end = 500.0;
  long sample_every = 100;
  double t_transient = 50.0;
  bool bath_correction = true;
};

struct PtConfig {
  PtDimerParams dimer = fig6_dimer();
  double mu_min = 0.0;
  double mu_max = 0.01;
  long mu_points = 1001;
};

struct OmitConfig {
  omit::OmitParams omit = fig5_omit();
  double probe_half_width = 0.5;
  long probe_points = 2001;
  std::vector<double> g0_values{1e-4, 2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2};
  std::vector<double> gamma_m_values{0.0, 0.0025, 0.005, 0.0075, 0.01};
};

struct EntangleConfig {
  PtDimerParams dimer = fig6_dimer();
  double squeezing = 0.05;
  double dt = 0.01;
  double t_end = 200.0;
  long sample_every = 10;
  double death_threshold = 1e-6;
  long sweep_points = 10;
  double sweep_max_ratio = 0.5;  ///< sweep γ_eff over [0, ratio·γ]
};

struct OracleConfig {
  SystemParams optomech{1.0, 1.0, 0.01, 3.0, 0.05, 0.0};
  cplx optomech_b0{0.6, 0.0};
  long optomech_cutoff = 12;
  double optomech_t_end = 5.0;
  double optomech_dt = 0.002;
  PtDimerParams dimer{1.0, 0.004, 0.004, 0.02, 0.0, -1.0};
  double dimer_squeezing = 0.05;
  long dimer_cutoff = 10;
  double dimer_t_end = 50.0;
  double dimer_dt = 0.01;
  long sample_every = 50;
};

inline GainSweepConfig gain_sweep(const json& j) {
  detail::Reader r(j, "gain-sweep scenario");
  GainSweepConfig c;
  c.system = detail::read_system(r, c.system);
  c.g_min = r.num("g_min", c.g_min);
  c.g_max = r.num("g_max", c.g_max);
  c.g_points = r.integer("g_points", c.g_points);
  c.delta_values = r.list("delta_values", c.delta_values);
  r.finish();
  require(c.g_min >= 0.0 && c.g_max >= c.g_min, "need 0 <= g_min <= g_max");
  require(c.g_points >= 2, "g_points must be >= 2");
  return c;
}

inline EvolveConfig evolve(const json& j) {
  detail::Reader r(j, "evolve scenario");
  EvolveConfig c;
  c.system = detail::read_system(r, c.system);
  InitialMoments& in = c.initial;
  in.b_mean = r.complex("b_mean", in.b_mean);
  in.n_b = r.num("n_b", in.n_b);
  in.bb = r.complex("bb", in.bb);
  in.n_a = r.num("n_a", in.n_a);
  in.ab = r.complex("ab", in.ab);
  in.a_mean = r.complex("a_mean", in.a_mean);
  c.dt = r.num("dt", c.dt);
  c.t_end = r.num("t_end", c.t_end);
  c.sample_every = r.integer("sample_every", c.sample_every);
  c.t_transient = r.num("t_transient", c.t_transient);
  c.bath_correction = r.flag("bath_correction", c.bath_correction);
  r.finish();
  require(in.n_b >= 0.0 && in.n_a >= 0.0, "initial occupations must be >= 0");
  detail::positive(c.dt, "dt");
  detail::positive(c.t_end, "t_end");
  require(c.sample_every >= 1, "sample_every must be >= 1");
  require(c.t_transient >= 0.0 && c.t_transient < c.t_end, "t_transient must lie in [0, t_end)");
  return c;
}

inline PtConfig pt_spectrum(const json& j) {
  detail::Reader r(j, "pt-spectrum scenario");
  PtConfig c;
  c.dimer = detail::read_dimer(r, c.dimer);
  c.mu_min = r.num("mu_min", c.mu_min);
  c.mu_max = r.num("mu_max", c.mu_max);
  c.mu_points = r.integer("mu_points", c.mu_points);
  r.finish();
  require(c.mu_min >= 0.0 && c.mu_max >= c.mu_min, "need 0 <= mu_min <= mu_max");
  require(c.mu_points >= 1, "mu_points must be >= 1");
  return c;
}

inline OmitConfig omit_config(const json& j) {
  detail::Reader r(j, "omit scenario");
  OmitConfig c;
  omit::OmitParams& o = c.omit;
  o.delta = r.num("delta", o.delta);
  o.omega_m = r.num("omega_m", o.omega_m);
  o.mu = r.num("mu", o.mu);
  o.kappa = r.num("kappa", o.kappa);
  o.gamma = r.num("gamma", o.gamma);
  o.gamma_gain = r.num("gamma_gain", o.gamma_gain);
  o.g0 = r.num("g0", o.g0);
  o.drive = r.num("drive", o.drive);
  c.probe_half_width = r.num("probe_half_width", c.probe_half_width);
  c.probe_points = r.integer("probe_points", c.probe_points);
  c.g0_values = r.list("g0_values", c.g0_values);
  c.gamma_m_values = r.list("gamma_m_values", c.gamma_m_values);
  r.finish();
  o.validate();
  detail::positive(c.probe_half_width, "probe_half_width");
  require(c.probe_points >= 3 && c.probe_points % 2 == 1, "probe_points must be odd and >= 3");
  for (double g : c.g0_values) require(g >= 0.0, "g0_values must be >= 0");
  for (double gm : c.gamma_m_values)
    require(o.gamma - 2.0 * gm >= 0.0, "gamma_m_values need gamma - 2*gamma_m >= 0 (gain rate >= 0)");
  return c;
}

inline EntangleConfig entangle(const json& j) {
  detail::Reader r(j, "entangle scenario");
  EntangleConfig c;
  c.dimer = detail::read_dimer(r, c.dimer);
  c.squeezing = r.num("squeezing", c.squeezing);
  c.dt = r.num("dt", c.dt);
  c.t_end = r.num("t_end", c.t_end);
  c.sample_every = r.integer("sample_every", c.sample_every);
  c.death_threshold = r.num("death_threshold", c.death_threshold);
  c.sweep_points = r.integer("sweep_points", c.sweep_points);
  c.sweep_max_ratio = r.num("sweep_max_ratio", c.sweep_max_ratio);
  r.finish();
  require(c.squeezing >= 0.0, "squeezing must be >= 0");
  detail::positive(c.dt, "dt");
  detail::positive(c.t_end, "t_end");
  detail::positive(c.death_threshold, "death_threshold");
  require(c.sample_every >= 1, "sample_every must be >= 1");
  require(c.sweep_points >= 2, "sweep_points must be >= 2");
  require(c.sweep_max_ratio >= 0.0 && c.sweep_max_ratio <= 0.5,
          "sweep_max_ratio must lie in [0, 0.5] so the gain rate stays >= 0");
  return c;
}

inline OracleConfig oracle_config(const json& j) {
  detail::Reader r(j, "oracle-check scenario");
  OracleConfig c;
  if (const json* o = r.object("optomech")) {
    detail::Reader ro(*o, "oracle-check optomech block");
    c.optomech = detail::read_system(ro, c.optomech);
    c.optomech_b0 = ro.complex("b_mean", c.optomech_b0);
    c.optomech_cutoff = ro.integer("cutoff", c.optomech_cutoff);
    c.optomech_t_end = ro.num("t_end", c.optomech_t_end);
    c.optomech_dt = ro.num("dt", c.optomech_dt);
    ro.finish();
  }
  if (const json* d = r.object("dimer")) {
    detail::Reader rd(*d, "oracle-check dimer block");
    c.dimer = detail::read_dimer(rd, c.dimer);
    c.dimer_squeezing = rd.num("squeezing", c.dimer_squeezing);
    c.dimer_cutoff = rd.integer("cutoff", c.dimer_cutoff);
    c.dimer_t_end = rd.num("t_end", c.dimer_t_end);
    c.dimer_dt = rd.num("dt", c.dimer_dt);
    rd.finish();
  }
  c.sample_every = r.integer("sample_every", c.sample_every);
  r.finish();
  require(c.optomech_cutoff >= 2 && c.optomech_cutoff <= 20, "optomech cutoff must lie in [2, 20]");
  require(c.dimer_cutoff >= 2 && c.dimer_cutoff <= 20, "dimer cutoff must lie in [2, 20]");
  require(c.optomech.n_th <= 2.0 && c.dimer.n_th_loss <= 2.0, "oracle runs need n_th <= 2");
  detail::positive(c.optomech_t_end, "optomech t_end");
  detail::positive(c.optomech_dt, "optomech dt");
  detail::positive(c.dimer_t_end, "dimer t_end");
  detail::positive(c.dimer_dt, "dimer dt");
  require(c.sample_every >= 1, "sample_every must be >= 1");
  return c;
}

/// Empty object when `path` is empty; otherwise the parsed file.
inline json load(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed scenario JSON in '" + path + "': " + e.what());
  }
}

}  // namespace ptosc::scenario
