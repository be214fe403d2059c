#pragma once

// Scenario types for the linearized blue-sideband optomechanical model and the
// closed-form constants of the adiabatically eliminated oscillator.

#include "ptosc/core.hpp"
#include "ptosc/gaussian.hpp"

#include <optional>
#include <string>

namespace ptosc {

/// Linearized cavity + oscillator scenario. Frequencies in units of omega_m.
struct SystemParams {
  double omega_m = 1.0;  ///< oscillator frequency
  double kappa = 0.1;    ///< cavity decay rate
  double gamma = 1e-5;   ///< intrinsic oscillator decay rate
  double delta = 3.0;    ///< drive detuning (blue sideband, > 0)
  double g_lin = 0.04;   ///< linearized coupling G, real and >= 0
  double n_th = 1000.0;  ///< bath thermal phonon number

  void validate() const {
    require(std::isfinite(omega_m) && omega_m > 0.0, "omega_m must be > 0");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(std::isfinite(delta), "delta must be finite");
    require(std::isfinite(g_lin) && g_lin >= 0.0, "g_lin must be real and >= 0");
    require(std::isfinite(n_th) && n_th >= 0.0, "n_th must be >= 0");
  }

  /// Lorentzian denominator 4(Δ-ω_m)² + κ² shared by every eliminated quantity.
  double lorentz_denominator() const {
    const double d = delta - omega_m;
    return 4.0 * d * d + kappa * kappa;
  }

  /// The elimination is trusted when the cavity is fast (κ ≫ γ) or far
  /// detuned from the sideband (|Δ-ω_m| ≫ G); "≫" means a factor of 10.
  bool elimination_trusted() const {
    return kappa >= 10.0 * gamma || std::abs(delta - omega_m) >= 10.0 * g_lin;
  }
};

/// Constants of the eliminated oscillator. gamma_eff < 0 is net gain.
struct EffectiveParams {
  double omega_eff = 1.0;
  double gamma_eff = 0.0;
  /// heating_rate / gamma_eff; empty when gamma_eff == 0 (0/0).
  std::optional<double> n_th_eff;
  /// gamma_eff * n_th_eff = γ n_th + 4G²κ/D, always >= 0.
  double heating_rate = 0.0;
};

/// PT dimer: lossy oscillator 1 coupled to gain oscillator 2 by phonon tunneling.
struct PtDimerParams {
  double omega = 1.0;
  double gamma_loss = 0.004;
  double gamma_gain = 0.004;
  double mu = 0.02;
  double n_th_loss = 0.0;
  /// Occupancy of the gain channel. The channel adds γ'(⟨b₂†b₂⟩ - n_th_gain)
  /// to d⟨b₂†b₂⟩/dt; it is completely positive only for n_th_gain <= -1.
  double n_th_gain = 0.0;

  void validate() const {
    require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    require(std::isfinite(mu) && mu >= 0.0, "mu must be >= 0");
    require(std::isfinite(gamma_loss) && gamma_loss >= 0.0, "gamma_loss must be >= 0");
    require(std::isfinite(gamma_gain) && gamma_gain >= 0.0, "gamma_gain must be >= 0");
    require(std::isfinite(n_th_loss) && n_th_loss >= 0.0, "n_th_loss must be >= 0");
    require(std::isfinite(n_th_gain), "n_th_gain must be finite");
  }

  /// (γ - γ')/2, the dissipation left over after gain compensation.
  double gamma_eff() const { return 0.5 * (gamma_loss - gamma_gain); }
};

/// Initial moments of the (cavity, oscillator) pair used by the elimination.
struct InitialMoments {
  cplx b_mean{0.0, 0.0};
  double n_b = 0.0;
  cplx bb{0.0, 0.0};
  double n_a = 0.0;
  cplx ab{0.0, 0.0};
  cplx a_mean{0.0, 0.0};

  OscillatorMoments oscillator() const { return {b_mean, n_b, bb}; }
};

inline EffectiveParams effective_params(const SystemParams& p) {
  p.validate();
  const double d = p.delta - p.omega_m;
  const double den = p.lorentz_denominator();
  const double g2 = p.g_lin * p.g_lin;
  EffectiveParams e;
  e.omega_eff = p.omega_m + 4.0 * g2 * d / den;
  e.gamma_eff = p.gamma - 4.0 * g2 * p.kappa / den;
  e.heating_rate = p.gamma * p.n_th + 4.0 * g2 * p.kappa / den;
  if (e.gamma_eff != 0.0) e.n_th_eff = e.heating_rate / e.gamma_eff;
  return e;
}

/// Coupling G* at which gamma_eff = -target_gain.
inline double balance_coupling(const SystemParams& p, double target_gain) {
  p.validate();
  require(std::isfinite(target_gain), "target_gain must be finite");
  const double need = p.gamma + target_gain;
  if (need < 0.0)
    throw InvalidInput("target gain " + std::to_string(target_gain) +
                       " below -gamma: no nonnegative coupling reaches it");
  return std::sqrt(need * p.lorentz_denominator() / (4.0 * p.kappa));
}

/// Oscillator initial condition corrected for the cavity transient that the
/// elimination discards. The mean and anomalous moment are rescaled with the
/// phonon number, so a real coherent input maps to ⟨b⟩' = √n_b'.
inline InitialMoments modified_initial(const SystemParams& p, const InitialMoments& init) {
  p.validate();
  require(init.n_b >= 0.0 && init.n_a >= 0.0, "initial occupations must be >= 0");
  const double den = p.lorentz_denominator();
  const double g = p.g_lin;
  const double d = p.delta - p.omega_m;
  const double nb = (1.0 + 8.0 * g * g / den) * init.n_b + 4.0 * g * g * init.n_a / den -
                    8.0 * g * d * init.ab.real() / den;
  if (!(nb >= 0.0))
    throw InvalidInput("modified initial phonon number is negative (" + std::to_string(nb) +
                       "); <ab>(0) is unphysical for the elimination");
  InitialMoments out = init;
  out.n_b = nb;
  if (init.n_b > 0.0) {
    const double s = std::sqrt(nb / init.n_b);
    out.b_mean = s * init.b_mean;
    out.bb = s * s * init.bb;
  }
  return out;
}

}  // namespace ptosc
