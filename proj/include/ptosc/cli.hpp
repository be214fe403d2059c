#pragma once

// Command-line driver. Every subcommand computes all of its outputs in memory
// first and only then touches --out, so a failed run leaves no partial files.
// Exit codes: 0 success, 1 bad input, 2 numerical failure.

#include "ptosc/csv.hpp"
#include "ptosc/elimination.hpp"
#include "ptosc/entanglement.hpp"
#include "ptosc/moments.hpp"
#include "ptosc/omit.hpp"
#include "ptosc/oracle.hpp"
#include "ptosc/parallel.hpp"
#include "ptosc/params.hpp"
#include "ptosc/ptcore.hpp"
#include "ptosc/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ptosc::cli {

using nlohmann::json;

/// Files to write (name -> contents) plus the summary object.
struct Outputs {
  std::map<std::string, std::string> files;
  json summary = json::object();
};

/// Summary scalars carry the same 12 significant digits as the CSVs.
inline json rounded(double v) { return json::parse(csv::num(v)); }

inline std::vector<double> linspace(double a, double b, long n) {
  std::vector<double> g(n);
  for (long k = 0; k < n; ++k) g[k] = n == 1 ? a : a + (b - a) * double(k) / double(n - 1);
  return g;
}

inline Outputs run_gain_sweep(const scenario::GainSweepConfig& c, unsigned threads) {
  const auto gs = linspace(c.g_min, c.g_max, c.g_points);
  auto rows = parallel_map(c.delta_values.size(), threads, [&](std::size_t i) {
    std::vector<std::vector<double>> out;
    SystemParams p = c.system;
    p.delta = c.delta_values[i];
    for (double g : gs) {
      p.g_lin = g;
      const EffectiveParams e = effective_params(p);
      out.push_back({p.delta, g, e.gamma_eff, e.omega_eff, e.heating_rate, p.gamma > 0 ? e.gamma_eff / p.gamma : 0.0});
    }
    return out;
  });
  std::ostringstream os;
  csv::header(os, {"delta", "g_lin", "gamma_eff", "omega_eff", "heating_rate", "gamma_eff_over_gamma"});
  for (const auto& block : rows)
    for (const auto& r : block) csv::row(os, r);
  Outputs o;
  o.files["gain_sweep.csv"] = os.str();
  const EffectiveParams e = effective_params(c.system);
  o.summary["gamma_eff"] = rounded(e.gamma_eff);
  o.summary["omega_eff"] = rounded(e.omega_eff);
  o.summary["heating_rate"] = rounded(e.heating_rate);
  o.summary["n_th_eff"] = e.n_th_eff ? rounded(*e.n_th_eff) : json(nullptr);
  o.summary["g_threshold"] = rounded(balance_coupling(c.system, 0.0));
  o.summary["g_balance"] = rounded(balance_coupling(c.system, c.system.gamma));
  o.summary["trusted"] = c.system.elimination_trusted();
  return o;
}

inline Outputs run_evolve(const scenario::EvolveConfig& c) {
  const SystemParams& p = c.system;
  const auto full = moments::evolve(p, moments::from_initial(c.initial), c.t_end, c.dt, c.sample_every);
  EffectiveParams e = effective_params(p);
  if (!c.bath_correction) e = elimination::without_bath_correction(e, p.n_th);
  const InitialMoments mod = modified_initial(p, c.initial);
  const auto full_osc = elimination::oscillator_part(full);
  const auto eff = elimination::evolve_effective(e, mod.oscillator(), full.times);
  // Without the bath correction the effective model can leave the physical
  // region (negative injection under gain); fidelity is undefined there.
  std::optional<elimination::FidelityTrace> fid;
  std::string unphysical;
  try {
    fid = elimination::fidelity_trace(full_osc, eff, c.t_transient);
  } catch (const InvalidInput& e) {
    if (c.bath_correction) throw;
    unphysical = e.what();
  }

  Outputs o;
  std::ostringstream f1, f2, f3;
  moments::write_csv(f1, full);
  elimination::write_csv(f2, eff);
  o.files["full.csv"] = f1.str();
  o.files["effective.csv"] = f2.str();
  if (fid) {
    elimination::write_csv(f3, *fid);
    o.files["fidelity.csv"] = f3.str();
  }
  o.summary["gamma_eff"] = rounded(e.gamma_eff);
  o.summary["omega_eff"] = rounded(e.omega_eff);
  o.summary["n_th_eff"] = e.n_th_eff ? rounded(*e.n_th_eff) : json(nullptr);
  o.summary["n_b0_modified"] = rounded(mod.n_b);
  o.summary["fidelity_avg"] = fid ? rounded(fid->average) : json(nullptr);
  if (!fid) o.summary["fidelity_note"] = unphysical;
  o.summary["max_rel_dev_n_b"] = rounded(elimination::max_occupation_deviation(full_osc, eff, c.t_transient));
  o.summary["bath_correction"] = c.bath_correction;
  o.summary["trusted"] = p.elimination_trusted();
  return o;
}

inline Outputs run_pt_spectrum(const scenario::PtConfig& c) {
  const auto spec = pt::sweep(c.dimer, linspace(c.mu_min, c.mu_max, c.mu_points));
  PtDimerParams p = c.dimer;
  double dev = 0.0;
  for (const auto& s : spec) {
    p.mu = s.mu;
    dev = std::max(dev, pt::deviation(s, pt::direct_eigenvalues(p)));
  }
  Outputs o;
  std::ostringstream os;
  pt::write_csv(os, spec);
  o.files["pt_spectrum.csv"] = os.str();
  o.summary["mu_ep"] = rounded(pt::exceptional_point(c.dimer));
  o.summary["max_direct_deviation"] = rounded(dev);
  return o;
}

inline Outputs run_omit(const scenario::OmitConfig& c, unsigned threads) {
  const auto grid = omit::centred_grid(c.omit, c.probe_half_width, static_cast<int>(c.probe_points));
  const auto spec = omit::spectrum(c.omit, grid);
  const std::size_t ng = c.g0_values.size(), nm = c.gamma_m_values.size();
  const auto depths = parallel_map(ng * nm, threads, [&](std::size_t k) {
    omit::OmitParams p = c.omit;
    p.g0 = c.g0_values[k / nm];
    p.gamma_gain = p.gamma - 2.0 * c.gamma_m_values[k % nm];
    return omit::window_depth(omit::spectrum(p, grid));
  });
  Outputs o;
  std::ostringstream s1, s2;
  omit::write_csv(s1, spec);
  csv::header(s2, {"g0", "gamma_m", "depth"});
  for (std::size_t k = 0; k < depths.size(); ++k) csv::row(s2, {c.g0_values[k / nm], c.gamma_m_values[k % nm], depths[k]});
  o.files["omit_spectrum.csv"] = s1.str();
  o.files["omit_depth.csv"] = s2.str();
  const auto centre = omit::response(c.omit, c.omit.omega_m_eff());
  const auto idx = omit::window_index(spec);
  o.summary["depth"] = rounded(omit::window_depth(spec));
  o.summary["window_delta"] = idx ? rounded(spec[*idx].delta_probe) : json(nullptr);
  o.summary["re_chi_at_sideband"] = rounded(centre.chi.real());
  o.summary["im_chi_at_sideband"] = rounded(centre.chi.imag());
  o.summary["gamma_m"] = rounded(c.omit.gamma_m());
  return o;
}

struct EntanglementPoint {
  double gamma_eff = 0.0;
  double avg = 0.0;
  double death = -1.0;
};

inline Outputs run_entangle(const scenario::EntangleConfig& c, unsigned threads) {
  const auto u0 = entanglement::tmsv_initial(c.squeezing);
  const auto trace = entanglement::negativity_trace(c.dimer, u0, c.t_end, c.dt, c.sample_every);
  const auto gs = linspace(0.0, c.sweep_max_ratio * c.dimer.gamma_loss, c.sweep_points);
  const auto sweep = parallel_map(gs.size(), threads, [&](std::size_t i) {
    PtDimerParams p = c.dimer;
    p.gamma_gain = p.gamma_loss - 2.0 * gs[i];
    const auto tr = entanglement::negativity_trace(p, u0, c.t_end, c.dt, c.sample_every);
    const auto ts = entanglement::death_time(tr, c.death_threshold);
    return EntanglementPoint{gs[i], entanglement::time_avg(tr, c.t_end), ts ? *ts : -1.0};
  });
  Outputs o;
  std::ostringstream s1, s2;
  entanglement::write_csv(s1, trace);
  csv::header(s2, {"gamma_eff", "En_avg", "T_s"});
  for (const auto& pt : sweep) csv::row(s2, {pt.gamma_eff, pt.avg, pt.death});
  o.files["entangle.csv"] = s1.str();
  o.files["entangle_sweep.csv"] = s2.str();
  const auto ts = entanglement::death_time(trace, c.death_threshold);
  o.summary["gamma_eff"] = rounded(c.dimer.gamma_eff());
  o.summary["En_0"] = rounded(trace.En.front());
  o.summary["En_avg"] = rounded(entanglement::time_avg(trace, c.t_end));
  o.summary["T_s"] = ts ? rounded(*ts) : json(-1);
  o.summary["T_s_infinite"] = !ts.has_value();
  return o;
}

inline Outputs run_oracle(const scenario::OracleConfig& c) {
  Outputs o;
  {
    oracle::FockConfig cfg;
    cfg.cutoff_a = cfg.cutoff_b = static_cast<int>(c.optomech_cutoff);
    cfg.model = oracle::Model::Optomech;
    const auto L = oracle::optomech_lindbladian(cfg, c.optomech);
    const auto rho0 = oracle::pure_density(
        oracle::product_ket(oracle::coherent_ket(cfg.cutoff_a, 0.0), oracle::coherent_ket(cfg.cutoff_b, c.optomech_b0)));
    const auto run = oracle::fock_evolve(cfg, L, rho0, c.optomech_t_end, c.optomech_dt, c.sample_every);
    const auto mom = moments::evolve(c.optomech, moments::coherent_state(0.0, c.optomech_b0), c.optomech_t_end,
                                     c.optomech_dt, c.sample_every);
    const auto ot = oracle::optomech_expectations(cfg, run);
    json dev = json::object();
    for (const auto& [k, v] : oracle::compare(ot, oracle::optomech_expectations(mom))) dev[k] = rounded(v);
    o.summary["optomech"] = {{"deviation", dev},
                              {"max_trace_error", rounded(run.diag.max_trace_error)},
                              {"min_eigenvalue", rounded(run.diag.min_eigenvalue)},
                              {"max_leakage", rounded(run.diag.max_leakage)}};
    std::ostringstream os;
    csv::header(os, {"t", "re_b", "im_b", "n_b", "re_bb", "im_bb", "n_a", "re_ab", "im_ab"});
    const auto& s = ot.series;
    for (std::size_t k = 0; k < ot.times.size(); ++k)
      csv::row(os, {ot.times[k], s.at("b")[k].real(), s.at("b")[k].imag(), s.at("n_b")[k].real(), s.at("bb")[k].real(),
                    s.at("bb")[k].imag(), s.at("n_a")[k].real(), s.at("ab")[k].real(), s.at("ab")[k].imag()});
    o.files["oracle_optomech.csv"] = os.str();
  }
  {
    oracle::FockConfig cfg;
    cfg.cutoff_a = cfg.cutoff_b = static_cast<int>(c.dimer_cutoff);
    cfg.model = oracle::Model::Dimer;
    const auto L = oracle::dimer_lindbladian(cfg, c.dimer);
    const auto run = oracle::fock_evolve(cfg, L, oracle::pure_density(oracle::tmsv_ket(cfg, c.dimer_squeezing)),
                                         c.dimer_t_end, c.dimer_dt, c.sample_every);
    const auto mom = entanglement::evolve_dimer(c.dimer, entanglement::tmsv_initial(c.dimer_squeezing), c.dimer_t_end,
                                                c.dimer_dt, c.sample_every);
    const auto ot = oracle::dimer_expectations(cfg, run);
    json dev = json::object();
    for (const auto& [k, v] : oracle::compare(ot, oracle::dimer_expectations(mom))) dev[k] = rounded(v);
    o.summary["dimer"] = {{"deviation", dev},
                           {"max_trace_error", rounded(run.diag.max_trace_error)},
                           {"min_eigenvalue", rounded(run.diag.min_eigenvalue)},
                           {"max_leakage", rounded(run.diag.max_leakage)}};
    std::ostringstream os;
    csv::header(os, {"t", "En"});
    for (std::size_t k = 0; k < ot.times.size(); ++k) csv::row(os, {ot.times[k], ot.series.at("En")[k].real()});
    o.files["oracle_dimer.csv"] = os.str();
  }
  return o;
}

inline void write_outputs(const Outputs& o, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, body] : o.files) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
  }
  std::ofstream s(fs::path(dir) / "summary.json", std::ios::binary);
  s << o.summary.dump(2) << '\n';
  if (!s) throw std::runtime_error("cannot write summary.json");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PT-symmetric oscillator simulations"};
  app.require_subcommand(1);
  std::string out_dir = ".";
  unsigned threads = 1;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for sweeps")->check(CLI::Range(1u, 256u));

  struct Cmd {
    const char* name;
    const char* help;
    CLI::App* app = nullptr;
    std::string scenario, preset;
  };
  std::vector<Cmd> cmds{{"gain-sweep", "effective dissipation and frequency vs coupling and detuning"},
                        {"evolve", "full vs eliminated oscillator dynamics and their fidelity"},
                        {"pt-spectrum", "dimer eigenvalues vs tunneling coupling"},
                        {"omit", "probe response spectra and window depth map"},
                        {"entangle", "log-negativity dynamics and its gamma_eff sweep"},
                        {"oracle-check", "moment engines vs truncated Fock-space integration"}};
  for (auto& c : cmds) {
    c.app = app.add_subcommand(c.name, c.help);
    c.app->fallthrough();
    c.app->add_option("scenario", c.scenario, "scenario JSON file");
    c.app->add_option("--preset", c.preset, "fig2|fig3|fig5|fig6");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  using scenario::Preset;
  try {
    Outputs o;
    for (auto& c : cmds) {
      if (!c.app->parsed()) continue;
      const std::string name = c.name;
      const Preset preset = scenario::parse_preset(c.preset);
      const json j = scenario::load(c.scenario);
      if (name == "gain-sweep") {
        scenario::require_preset(preset, {Preset::Fig2}, c.name);
        o = run_gain_sweep(scenario::gain_sweep(j), threads);
      } else if (name == "evolve") {
        scenario::require_preset(preset, {Preset::Fig2}, c.name);
        o = run_evolve(scenario::evolve(j));
      } else if (name == "pt-spectrum") {
        scenario::require_preset(preset, {Preset::Fig3, Preset::Fig6}, c.name);
        o = run_pt_spectrum(scenario::pt_spectrum(j));
      } else if (name == "omit") {
        scenario::require_preset(preset, {Preset::Fig5}, c.name);
        o = run_omit(scenario::omit_config(j), threads);
      } else if (name == "entangle") {
        scenario::require_preset(preset, {Preset::Fig6}, c.name);
        o = run_entangle(scenario::entangle(j), threads);
      } else {
        scenario::require_preset(preset, {}, c.name);
        o = run_oracle(scenario::oracle_config(j));
      }
      o.summary["command"] = name;
      write_outputs(o, out_dir);
      out << o.summary.dump(2) << '\n';
    }
    return 0;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ptosc::cli
