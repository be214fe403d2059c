#pragma once

// Second-moment dynamics of the lossy/gain oscillator dimer and its Gaussian
// entanglement. Ordered basis u = (b₁†, b₁, b₂†, b₂); first moments stay zero.

#include "ptosc/core.hpp"
#include "ptosc/csv.hpp"
#include "ptosc/gaussian.hpp"
#include "ptosc/params.hpp"
#include "ptosc/rk4.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

namespace ptosc::entanglement {

enum Index : int { B1d = 0, B1 = 1, B2d = 2, B2 = 3 };
inline constexpr std::array<int, 4> kConjugate{B1, B1d, B2, B2d};

struct DimerMomentState {
  double t = 0.0;
  Mat4c U = Mat4c::Zero();

  double n1() const { return U(B1d, B1).real(); }
  double n2() const { return U(B2d, B2).real(); }
};

struct DimerDynamics {
  Mat4c M;
  Mat4c N;
};

/// Drift and injection of dU/dt = MU + UMᵀ + N for H = ω(b₁†b₁ + b₂†b₂) +
/// μ(b₁†b₂ + b₂†b₁), loss γ(n+1)D[b₁] + γn D[b₁†] and gain written as a
/// channel of negative rate -γ' with occupancy n': -γ'(n'+1)D[b₂] - γ'n'D[b₂†].
inline DimerDynamics dimer_drift_noise(const PtDimerParams& p) {
  p.validate();
  const double w = p.omega, g = p.gamma_loss, gp = p.gamma_gain, mu = p.mu;
  DimerDynamics d{Mat4c::Zero(), Mat4c::Zero()};
  Mat4c& m = d.M;
  m(B1, B1) = cplx(-0.5 * g, -w);
  m(B1, B2) = cplx(0.0, -mu);
  m(B1d, B1d) = cplx(-0.5 * g, w);
  m(B1d, B2d) = cplx(0.0, mu);
  m(B2, B2) = cplx(0.5 * gp, -w);
  m(B2, B1) = cplx(0.0, -mu);
  m(B2d, B2d) = cplx(0.5 * gp, w);
  m(B2d, B1d) = cplx(0.0, mu);
  d.N(B1, B1d) = g * (p.n_th_loss + 1.0);
  d.N(B1d, B1) = g * p.n_th_loss;
  d.N(B2, B2d) = -gp * (p.n_th_gain + 1.0);
  d.N(B2d, B2) = -gp * p.n_th_gain;
  return d;
}

inline Mat4c conjugate_swap(const Mat4c& u) {
  Mat4c r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = std::conj(u(kConjugate[j], kConjugate[i]));
  return r;
}

/// Product of thermal states with occupations n1, n2.
inline DimerMomentState thermal_product(double n1, double n2) {
  require(n1 >= 0.0 && n2 >= 0.0, "occupations must be >= 0");
  DimerMomentState s;
  s.U(B1d, B1) = n1;
  s.U(B1, B1d) = n1 + 1.0;
  s.U(B2d, B2) = n2;
  s.U(B2, B2d) = n2 + 1.0;
  return s;
}

/// Two-mode squeezed vacuum with <b_k†b_k> = sinh²r and <b₁b₂> = -sinh(2r)/2.
inline DimerMomentState tmsv_initial(double r) {
  require(std::isfinite(r) && r >= 0.0, "squeezing r must be >= 0");
  const double s2 = std::sinh(r) * std::sinh(r);
  DimerMomentState s = thermal_product(s2, s2);
  const double c = -0.5 * std::sinh(2.0 * r);
  s.U(B1, B2) = s.U(B2, B1) = c;
  s.U(B1d, B2d) = s.U(B2d, B1d) = c;
  return s;
}

inline double max_step(const PtDimerParams& p) { return 0.05 / p.omega; }

namespace detail {

inline void check_state(const DimerMomentState& s) {
  if (!all_finite(s.U)) throw NumericalError("dimer integration produced NaN/Inf at t=" + std::to_string(s.t));
  const double scale = std::max(1.0, s.U.cwiseAbs().maxCoeff());
  const double c1 = std::abs(s.U(B1, B1d) - s.U(B1d, B1) - 1.0);
  const double c2 = std::abs(s.U(B2, B2d) - s.U(B2d, B2) - 1.0);
  if (std::max(c1, c2) > 1e-8 * std::max(1.0, 1e-4 * scale))
    throw NumericalError("commutator ledger drifted at t=" + std::to_string(s.t));
  if (s.n1() < -1e-9 * scale || s.n2() < -1e-9 * scale)
    throw NumericalError("negative occupation at t=" + std::to_string(s.t));
}

}  // namespace detail

inline std::vector<DimerMomentState> evolve_dimer(const PtDimerParams& p, const DimerMomentState& u0,
                                                  double t_end, double dt, long sample_every = 1) {
  p.validate();
  require(sample_every >= 1, "sample_every must be >= 1");
  if (dt > max_step(p) * (1.0 + 1e-12))
    throw InvalidInput("dt=" + std::to_string(dt) + " exceeds the step bound " + std::to_string(max_step(p)));
  const TimeGrid grid = TimeGrid::covering(t_end, dt);
  const DimerDynamics dyn = dimer_drift_noise(p);
  const Mat4c mt = dyn.M.transpose();
  Mat4c u = u0.U;
  std::vector<DimerMomentState> out;
  auto record = [&](long k) {
    DimerMomentState s{grid.time(k), u};
    detail::check_state(s);
    out.push_back(s);
  };
  record(0);
  for (long k = 1; k <= grid.steps; ++k) {
    u = rk4_step(u, grid.h, [&](const Mat4c& y) -> Mat4c { return dyn.M * y + y * mt + dyn.N; });
    if (!all_finite(u)) throw NumericalError("dimer integration overflow at t=" + std::to_string(grid.time(k)));
    const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
    if ((u - conjugate_swap(u)).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw NumericalError("conjugation symmetry broken at t=" + std::to_string(grid.time(k)));
    u = 0.5 * (u + conjugate_swap(u));
    if (k % sample_every == 0 || k == grid.steps) record(k);
  }
  return out;
}

/// C = ½[SUSᵀ + (SUSᵀ)ᵀ] over (x₁, p₁, x₂, p₂), S = T ⊕ T,
/// T = (1/√2)[[1, 1], [i, -i]] acting on (b†, b).
inline Mat4d to_covariance(const DimerMomentState& st) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat2c t;
  t << r, r, cplx(0, r), cplx(0, -r);
  Mat4c s = Mat4c::Zero();
  s.block<2, 2>(0, 0) = t;
  s.block<2, 2>(2, 2) = t;
  const Mat4c sus = s * st.U * s.transpose();
  const Mat4c c = 0.5 * (sus + sus.transpose());
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if (c.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NumericalError("covariance has an imaginary residue at t=" + std::to_string(st.t));
  return c.real();
}

/// Smallest symplectic eigenvalue of the partial transpose (p₂ -> -p₂), from
/// the eigenvalues of -(ΣC̃)².
inline double partial_transpose_symplectic_min(const Mat4d& c) {
  Mat4d flip = Mat4d::Identity();
  flip(3, 3) = -1.0;
  const Mat4d ct = flip * c * flip;
  const Mat4d sigma = symplectic_form(2);
  const Mat4d sc = sigma * ct;
  const Mat4d q = -(sc * sc);
  Eigen::EigenSolver<Mat4d> es(q, false);
  const auto ev = es.eigenvalues();
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  double best = INFINITY;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(ev(k).imag()) > 1e-8 * scale || ev(k).real() <= 0.0)
      throw NumericalError("partially transposed covariance has a non-positive symplectic spectrum");
    best = std::min(best, ev(k).real());
  }
  return std::sqrt(best);
}

/// E_n = max(0, -ln 2ζ). Values under 1e-13 are rounding on a separable state
/// (vacuum gives ζ = ½ - ulp) and are reported as 0.
inline double log_negativity(const Mat4d& c) {
  const double e = -std::log(2.0 * partial_transpose_symplectic_min(c));
  return e > 1e-13 ? e : 0.0;
}

struct NegativityTrace {
  std::vector<double> times;
  std::vector<double> En;
};

inline NegativityTrace negativity_series(const std::vector<DimerMomentState>& states) {
  NegativityTrace out;
  out.times.reserve(states.size());
  out.En.reserve(states.size());
  for (const auto& s : states) {
    out.times.push_back(s.t);
    out.En.push_back(log_negativity(to_covariance(s)));
  }
  return out;
}

inline NegativityTrace negativity_trace(const PtDimerParams& p, const DimerMomentState& u0, double t_end,
                                        double dt = 0.01, long sample_every = 1) {
  return negativity_series(evolve_dimer(p, u0, t_end, dt, sample_every));
}

/// First sample time after which E_n stays below `threshold` for the rest of
/// the series; empty (infinite) if the last sample is still entangled.
inline std::optional<double> death_time(const NegativityTrace& tr, double threshold = 1e-6) {
  require(!tr.En.empty(), "death_time: empty series");
  if (tr.En.back() >= threshold) return std::nullopt;
  std::size_t k = tr.En.size() - 1;
  while (k > 0 && tr.En[k - 1] < threshold) --k;
  return tr.times[k];
}

/// (1/T)∫₀ᵀ E_n dt by the trapezoid rule over the samples inside [0, T].
inline double time_avg(const NegativityTrace& tr, double horizon) {
  require(!tr.En.empty(), "time_avg: empty series");
  require(horizon > 0.0 && horizon <= tr.times.back() * (1.0 + 1e-12), "time_avg: horizon outside the series");
  double acc = 0.0, last = 0.0;
  for (std::size_t k = 1; k < tr.times.size() && tr.times[k - 1] < horizon; ++k) {
    const double t1 = std::min(tr.times[k], horizon);
    const double frac = (t1 - tr.times[k - 1]) / (tr.times[k] - tr.times[k - 1]);
    const double e1 = tr.En[k - 1] + frac * (tr.En[k] - tr.En[k - 1]);
    acc += 0.5 * (tr.En[k - 1] + e1) * (t1 - tr.times[k - 1]);
    last = t1;
  }
  return acc / last;
}

inline void write_csv(std::ostream& os, const NegativityTrace& tr) {
  csv::header(os, {"t", "En"});
  for (std::size_t k = 0; k < tr.times.size(); ++k) csv::row(os, {tr.times[k], tr.En[k]});
}

}  // namespace ptosc::entanglement
