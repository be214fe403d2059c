#pragma once

// Probe response of a cavity coupled to the symmetric supermode of a PT
// oscillator dimer. Only the first probe sideband a₊ is kept.

#include "ptosc/core.hpp"
#include "ptosc/csv.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

namespace ptosc::omit {

struct OmitParams {
  double delta = 1.0;       ///< effective cavity detuning Δ
  double omega_m = 1.0;     ///< bare oscillator frequency
  double mu = 0.02;         ///< dimer tunneling coupling
  double kappa = 0.15;
  double gamma = 0.02;      ///< oscillator loss γ
  double gamma_gain = 0.02; ///< oscillator gain γ'
  double g0 = 5e-4;         ///< single-photon coupling
  double drive = 10.0;      ///< pump amplitude Ω_d

  double omega_m_eff() const { return omega_m + mu; }
  double gamma_m() const { return 0.5 * (gamma - gamma_gain); }
  double g() const { return std::sqrt(2.0) * g0; }

  void validate() const {
    require(std::isfinite(delta), "delta must be finite");
    require(std::isfinite(omega_m) && omega_m > 0.0, "omega_m must be > 0");
    require(std::isfinite(mu), "mu must be finite");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(gamma_gain) && gamma_gain >= 0.0, "gamma_gain must be >= 0");
    require(std::isfinite(g0) && g0 >= 0.0, "g0 must be >= 0");
    require(std::isfinite(drive) && drive >= 0.0, "drive must be >= 0");
  }
};

struct SteadyState {
  cplx a0;
  double q0 = 0.0;
  cplx beta;
};

struct OmitResponse {
  double delta_probe = 0.0;
  cplx a_plus;
  cplx chi;
};

inline SteadyState steady_state(const OmitParams& p) {
  p.validate();
  SteadyState s;
  s.a0 = p.drive / cplx(0.5 * p.kappa, p.delta);
  s.q0 = 2.0 * p.g0 * std::norm(s.a0) / p.omega_m;
  s.beta = cplx(0.0, p.g0 * p.omega_m * s.q0);
  return s;
}

/// a₊ = [X·A + β] / [X·B·A + 2iβΔ], X = ω'² - δ² - iδγ_m/2,
/// A = -i(Δ+δ) + κ/2, B = i(Δ-δ) + κ/2; χ = κ a₊.
inline OmitResponse response(const OmitParams& p, const SteadyState& ss, double delta_probe) {
  const double w = p.omega_m_eff();
  const double d = delta_probe;
  const cplx x(w * w - d * d, -0.5 * d * p.gamma_m());
  const cplx a(0.5 * p.kappa, -(p.delta + d));
  const cplx b(0.5 * p.kappa, p.delta - d);
  // Without optomechanical coupling the cavity responds on its own; taking the
  // ratio would give 0/0 at an undamped mechanical resonance.
  if (ss.beta == cplx(0.0, 0.0)) return {d, 1.0 / b, p.kappa / b};
  const cplx num = x * a + ss.beta;
  const cplx den = x * b * a + 2.0 * kI * ss.beta * p.delta;
  if (den == cplx(0.0, 0.0))
    throw NumericalError("probe response denominator vanishes at delta=" + std::to_string(d) +
                         " (Delta=" + std::to_string(p.delta) + ", kappa=" + std::to_string(p.kappa) + ")");
  OmitResponse r;
  r.delta_probe = d;
  r.a_plus = num / den;
  r.chi = p.kappa * r.a_plus;
  return r;
}

inline OmitResponse response(const OmitParams& p, double delta_probe) {
  return response(p, steady_state(p), delta_probe);
}

inline std::vector<OmitResponse> spectrum(const OmitParams& p, const std::vector<double>& grid) {
  const SteadyState ss = steady_state(p);
  std::vector<OmitResponse> out;
  out.reserve(grid.size());
  for (double d : grid) out.push_back(response(p, ss, d));
  return out;
}

/// Uniform grid of `points` probe detunings centred on ω_m + μ, so the window
/// centre is itself a grid point.
inline std::vector<double> centred_grid(const OmitParams& p, double half_width, int points) {
  require(points >= 3 && points % 2 == 1, "grid needs an odd number (>= 3) of points");
  require(half_width > 0.0, "half_width must be > 0");
  const double c = p.omega_m_eff();
  const int half = points / 2;
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k) g[k] = c + half_width * double(k - half) / double(half);
  return g;
}

/// Index of the deepest interior local minimum of Re χ, if any.
inline std::optional<std::size_t> window_index(const std::vector<OmitResponse>& spec) {
  std::optional<std::size_t> best;
  for (std::size_t k = 1; k + 1 < spec.size(); ++k) {
    const double v = spec[k].chi.real();
    if (v <= spec[k - 1].chi.real() && v <= spec[k + 1].chi.real() &&
        (v < spec[k - 1].chi.real() || v < spec[k + 1].chi.real())) {
      if (!best || v < spec[*best].chi.real()) best = k;
    }
  }
  return best;
}

/// (max Re χ - Re χ(centre)) / max Re χ, with the centre at the deepest
/// interior dip. A scan edge is never a window; no dip gives 0.
inline double window_depth(const std::vector<OmitResponse>& spec) {
  if (spec.size() < 3) return 0.0;
  double peak = spec.front().chi.real();
  for (const auto& r : spec) peak = std::max(peak, r.chi.real());
  const auto idx = window_index(spec);
  if (!idx || !(peak > 0.0)) return 0.0;
  return std::clamp((peak - spec[*idx].chi.real()) / peak, 0.0, 1.0);
}

struct CouplingSearch {
  double g0_lo = 1e-7;
  double g0_hi = 0.05;
  int iterations = 60;
};

/// Smallest g₀ in the bracket with window_depth >= target on the fixed grid,
/// by bisection in log g₀. Returns the lower bracket edge when it already
/// meets the target.
inline double required_coupling(OmitParams p, double target_depth, const std::vector<double>& grid,
                                const CouplingSearch& cfg = {}) {
  require(target_depth > 0.0 && target_depth < 1.0, "target_depth must lie in (0,1)");
  require(cfg.g0_lo > 0.0 && cfg.g0_hi > cfg.g0_lo, "bad g0 bracket");
  auto depth_at = [&](double g0) {
    p.g0 = g0;
    return window_depth(spectrum(p, grid));
  };
  if (depth_at(cfg.g0_lo) >= target_depth) return cfg.g0_lo;
  if (depth_at(cfg.g0_hi) < target_depth)
    throw NumericalError("window depth " + std::to_string(target_depth) + " unreachable for g0 <= " +
                         std::to_string(cfg.g0_hi));
  double lo = std::log(cfg.g0_lo), hi = std::log(cfg.g0_hi);
  for (int it = 0; it < cfg.iterations && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (depth_at(std::exp(mid)) >= target_depth ? hi : lo) = mid;
  }
  return std::exp(hi);
}

inline void write_csv(std::ostream& os, const std::vector<OmitResponse>& spec) {
  csv::header(os, {"delta", "re_chi", "im_chi"});
  for (const auto& r : spec) csv::row(os, {r.delta_probe, r.chi.real(), r.chi.imag()});
}

}  // namespace ptosc::omit
