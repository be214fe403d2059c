#pragma once

// Closed-form propagation of the cavity-eliminated oscillator and the Gaussian
// fidelity used to compare it with the full two-mode moment flow.

#include "ptosc/core.hpp"
#include "ptosc/csv.hpp"
#include "ptosc/gaussian.hpp"
#include "ptosc/moments.hpp"
#include "ptosc/params.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace ptosc::elimination {

struct OscillatorTrajectory {
  std::vector<double> times;
  std::vector<OscillatorMoments> states;
};

/// Same constants with the bath correction switched off: the injection term
/// becomes Γ_eff·n_th instead of γ n_th + 4G²κ/D. Debug/diagnostic use only.
inline EffectiveParams without_bath_correction(const EffectiveParams& e, double n_th) {
  EffectiveParams out = e;
  out.heating_rate = e.gamma_eff * n_th;
  out.n_th_eff = n_th;
  return out;
}

/// (1 - e^{-Γt})/Γ, continuous through Γ = 0.
inline double relaxation_integral(double gamma, double t) {
  const double x = gamma * t;
  if (std::abs(x) < 1e-8) return t * (1.0 - 0.5 * x);
  return -std::expm1(-x) / gamma;
}

inline OscillatorMoments effective_at(const EffectiveParams& e, const OscillatorMoments& init, double t) {
  const double g = e.gamma_eff;
  OscillatorMoments s;
  s.b = init.b * std::exp(cplx(-0.5 * g * t, -e.omega_eff * t));
  s.n = init.n * std::exp(-g * t) + e.heating_rate * relaxation_integral(g, t);
  s.bb = init.bb * std::exp(cplx(-g * t, -2.0 * e.omega_eff * t));
  return s;
}

/// Closed-form trajectory sampled at `times`; `init` should already carry the
/// cavity-transient correction (params::modified_initial).
inline OscillatorTrajectory evolve_effective(const EffectiveParams& e, const OscillatorMoments& init,
                                             const std::vector<double>& times) {
  OscillatorTrajectory out;
  out.times = times;
  out.states.reserve(times.size());
  for (double t : times) out.states.push_back(effective_at(e, init, t));
  return out;
}

inline OscillatorTrajectory oscillator_part(const moments::Trajectory& tr) {
  OscillatorTrajectory out;
  out.times = tr.times;
  out.states.reserve(tr.states.size());
  for (const auto& s : tr.states) out.states.push_back(moments::reduced_oscillator(s));
  return out;
}

/// Uhlmann fidelity of two single-mode Gaussian states (vacuum variance 1/2):
///   F = 2 / (sqrt(Δ + Λ) - sqrt(Λ)) · exp(-½ dᵀ (σ₁+σ₂)⁻¹ d),
///   Δ = 4 det(σ₁+σ₂),  Λ = (4 det σ₁ - 1)(4 det σ₂ - 1).
inline double gaussian_fidelity(const OscillatorMoments& ma, const OscillatorMoments& mb) {
  const SingleModeGaussian a = to_gaussian(ma);
  const SingleModeGaussian b = to_gaussian(mb);
  auto purity_excess = [](const Mat2d& s, const char* which) {
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    const double ex = 4.0 * s.determinant() - 1.0;
    if (!(s(0, 0) > 0.0 && s(1, 1) > 0.0) || ex < -1e-9 * scale * scale)
      throw InvalidInput(std::string("unphysical covariance for state ") + which);
    return std::max(ex, 0.0);
  };
  const double lam = purity_excess(a.cov, "A") * purity_excess(b.cov, "B");
  const Mat2d sum = a.cov + b.cov;
  const double big = 4.0 * sum.determinant();
  const Eigen::Vector2d d = a.mean - b.mean;
  const double expo = -0.5 * d.dot(sum.inverse() * d);
  // sqrt(Δ+Λ) - sqrt(Λ) loses everything when Λ ≫ Δ (hot states); rationalize.
  const double denom = big / (std::sqrt(big + lam) + std::sqrt(lam));
  const double f = 2.0 / denom * std::exp(expo);
  if (!std::isfinite(f)) throw NumericalError("fidelity evaluation overflowed");
  return std::clamp(f, 0.0, 1.0);
}

struct FidelityTrace {
  std::vector<double> times;
  std::vector<double> fidelity;
  double average = 0.0;  ///< mean over samples with t >= t_transient
};

inline FidelityTrace fidelity_trace(const OscillatorTrajectory& full, const OscillatorTrajectory& eff,
                                    double t_transient = 50.0) {
  require(full.times.size() == eff.times.size() && !full.times.empty(),
          "fidelity_trace: trajectories have different lengths");
  FidelityTrace out;
  double acc = 0.0;
  long count = 0;
  for (std::size_t k = 0; k < full.times.size(); ++k) {
    const double t = full.times[k];
    require(std::abs(t - eff.times[k]) <= 1e-9 * std::max(1.0, std::abs(t)),
            "fidelity_trace: time grids differ at sample " + std::to_string(k));
    const double f = gaussian_fidelity(full.states[k], eff.states[k]);
    out.times.push_back(t);
    out.fidelity.push_back(f);
    if (t >= t_transient) {
      acc += f;
      ++count;
    }
  }
  require(count > 0, "fidelity_trace: no samples beyond the transient cutoff");
  out.average = acc / static_cast<double>(count);
  return out;
}

/// Largest |n_full - n_eff| / max(1, n_full) over samples with t >= t_transient.
inline double max_occupation_deviation(const OscillatorTrajectory& full, const OscillatorTrajectory& eff,
                                       double t_transient = 50.0) {
  require(full.times.size() == eff.times.size(), "trajectories have different lengths");
  double worst = 0.0;
  for (std::size_t k = 0; k < full.times.size(); ++k) {
    if (full.times[k] < t_transient) continue;
    const double nf = full.states[k].n;
    worst = std::max(worst, std::abs(nf - eff.states[k].n) / std::max(1.0, nf));
  }
  return worst;
}

inline void write_csv(std::ostream& os, const OscillatorTrajectory& tr) {
  csv::header(os, {"t", "re_b", "im_b", "n_b", "re_bb", "im_bb", "n_a", "re_ab", "im_ab"});
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const auto& s = tr.states[k];
    csv::row(os, {tr.times[k], s.b.real(), s.b.imag(), s.n, s.bb.real(), s.bb.imag(), 0.0, 0.0, 0.0});
  }
}

inline void write_csv(std::ostream& os, const FidelityTrace& tr) {
  csv::header(os, {"t", "F"});
  for (std::size_t k = 0; k < tr.times.size(); ++k) csv::row(os, {tr.times[k], tr.fidelity[k]});
}

}  // namespace ptosc::elimination
