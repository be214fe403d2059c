#pragma once

// Exact first/second-moment propagation of the linearized cavity+oscillator
// master equation. For a quadratic Hamiltonian with linear jump operators the
// moment hierarchy closes:
//
//   d<u>/dt = M <u>,   dU/dt = M U + U Mᵀ + N,   U_ij = <u_i u_j>,
//
// over the ordered basis u = (a, a†, b, b†). U keeps operator order (not
// symmetrized), so the commutator enters through U itself, e.g. U(a,a†) =
// <a†a> + 1, and N only carries the dissipator cross terms Γ[L†,u_i][u_j,L].

#include "ptosc/core.hpp"
#include "ptosc/csv.hpp"
#include "ptosc/gaussian.hpp"
#include "ptosc/params.hpp"
#include "ptosc/rk4.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace ptosc::moments {

enum Index : int { A = 0, Ad = 1, B = 2, Bd = 3 };

/// Index of the Hermitian conjugate operator in the basis (a, a†, b, b†).
inline constexpr std::array<int, 4> kConjugate{Ad, A, Bd, B};

struct MomentState {
  double t = 0.0;
  Vec2c mean = Vec2c::Zero();  ///< (<a>, <b>)
  Mat4c second = Mat4c::Zero();

  Vec4c mean4() const {
    Vec4c m;
    m << mean(0), std::conj(mean(0)), mean(1), std::conj(mean(1));
    return m;
  }
  double n_a() const { return second(Ad, A).real(); }
  double n_b() const { return second(Bd, B).real(); }
  cplx ab() const { return second(A, B); }
  cplx bb() const { return second(B, B); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<MomentState> states;
};

/// Vacuum in both modes, with the commutator entries filled in.
inline MomentState vacuum_state() {
  MomentState s;
  s.second(A, Ad) = 1.0;
  s.second(B, Bd) = 1.0;
  return s;
}

/// Full second-moment matrix from the elimination's initial data. Moments it
/// does not carry (<aa>, <a†b>) are taken uncorrelated: <aa> = <a>², <a†b> = <a>*<b>.
inline MomentState from_initial(const InitialMoments& in) {
  const cplx al = in.a_mean, be = in.b_mean;
  MomentState s;
  s.mean << al, be;
  Mat4c& u = s.second;
  u(A, A) = al * al;
  u(Ad, Ad) = std::conj(u(A, A));
  u(Ad, A) = in.n_a;
  u(A, Ad) = in.n_a + 1.0;
  u(B, B) = in.bb;
  u(Bd, Bd) = std::conj(in.bb);
  u(Bd, B) = in.n_b;
  u(B, Bd) = in.n_b + 1.0;
  u(A, B) = u(B, A) = in.ab;
  u(Ad, Bd) = u(Bd, Ad) = std::conj(in.ab);
  u(A, Bd) = u(Bd, A) = al * std::conj(be);
  u(Ad, B) = u(B, Ad) = std::conj(al) * be;
  return s;
}

/// Coherent product state |α>|β>.
inline MomentState coherent_state(cplx alpha, cplx beta) {
  InitialMoments in;
  in.a_mean = alpha;
  in.b_mean = beta;
  in.n_a = std::norm(alpha);
  in.n_b = std::norm(beta);
  in.bb = beta * beta;
  in.ab = alpha * beta;
  return from_initial(in);
}

/// Linear drift of (a, a†, b, b†) under H = -Δa†a + ω b†b + G(a†b† + ab) and
/// the cavity/oscillator damping.
inline Mat4c drift_matrix(const SystemParams& p) {
  p.validate();
  const double g = p.g_lin;
  Mat4c m = Mat4c::Zero();
  m(A, A) = cplx(-0.5 * p.kappa, p.delta);
  m(A, Bd) = cplx(0.0, -g);
  m(Ad, Ad) = cplx(-0.5 * p.kappa, -p.delta);
  m(Ad, B) = cplx(0.0, g);
  m(B, B) = cplx(-0.5 * p.gamma, -p.omega_m);
  m(B, Ad) = cplx(0.0, -g);
  m(Bd, Bd) = cplx(-0.5 * p.gamma, p.omega_m);
  m(Bd, A) = cplx(0.0, g);
  return m;
}

/// Constant injections Γ[L†,u_i][u_j,L] of the three damping channels.
inline Mat4c noise_matrix(const SystemParams& p) {
  p.validate();
  Mat4c n = Mat4c::Zero();
  n(A, Ad) = p.kappa;
  n(B, Bd) = p.gamma * (p.n_th + 1.0);
  n(Bd, B) = p.gamma * p.n_th;
  return n;
}

/// Right-hand side of the second-moment flow.
inline Mat4c lyapunov_rhs(const Mat4c& m, const Mat4c& n, const Mat4c& u) {
  return m * u + u * m.transpose() + n;
}

/// (U + conj-swap(U))/2 where conj-swap(U)_ij = conj(U_{j̄ ī}).
inline Mat4c conjugate_swap(const Mat4c& u) {
  Mat4c r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = std::conj(u(kConjugate[j], kConjugate[i]));
  return r;
}

inline double conjugation_defect(const Mat4c& u) { return (u - conjugate_swap(u)).cwiseAbs().maxCoeff(); }

/// Two-mode quadrature covariance over (x_a, p_a, x_b, p_b), vacuum variance 1/2.
inline Mat4d covariance(const MomentState& s) {
  const Vec4c m = s.mean4();
  const Mat4c centered = s.second - m * m.transpose();
  const double r = 1.0 / std::sqrt(2.0);
  Mat2c t;
  t << r, r, cplx(0, -r), cplx(0, r);  // (o, o†) -> (x, p)
  Mat4c sm = Mat4c::Zero();
  sm.block<2, 2>(0, 0) = t;
  sm.block<2, 2>(2, 2) = t;
  const Mat4c c = sm * centered * sm.transpose();
  return (0.5 * (c + c.transpose())).real();
}

inline bool is_physical(const MomentState& s, double tol = 1e-9) {
  const double scale = std::max(1.0, s.second.cwiseAbs().maxCoeff());
  return uncertainty_margin(covariance(s)) >= -tol * scale;
}

inline OscillatorMoments reduced_oscillator(const MomentState& s) {
  return {s.mean(1), s.n_b(), s.bb()};
}

/// Largest step accepted by evolve: 1/20 of the fastest period scale.
inline double max_step(const SystemParams& p) {
  return 0.05 / std::max({p.omega_m, std::abs(p.delta), p.kappa});
}

namespace detail {

inline void check_state(const MomentState& s, double t) {
  if (!all_finite(s.second) || !finite(s.mean(0)) || !finite(s.mean(1)))
    throw NumericalError("moment integration produced NaN/Inf at t=" + std::to_string(t));
  const double scale = std::max(1.0, s.second.cwiseAbs().maxCoeff());
  const double ca = std::abs(s.second(A, Ad) - s.second(Ad, A) - 1.0);
  const double cb = std::abs(s.second(B, Bd) - s.second(Bd, B) - 1.0);
  if (std::max(ca, cb) > 1e-8 * std::max(1.0, 1e-4 * scale))
    throw NumericalError("commutator ledger drifted at t=" + std::to_string(t));
  if (s.n_a() < -1e-9 * scale || s.n_b() < -1e-9 * scale)
    throw NumericalError("negative occupation at t=" + std::to_string(t));
}

}  // namespace detail

/// Fixed-step RK4 propagation; samples every `sample_every` steps plus t=0.
/// The centred moments V = U - ⟨u⟩⟨u⟩ᵀ obey the same Lyapunov flow and are
/// what gets integrated, so truncation error does not scale with |⟨u⟩|² and
/// cannot push a near-pure state's covariance across the uncertainty bound.
inline Trajectory evolve(const SystemParams& p, const MomentState& init, double t_end, double dt,
                         long sample_every = 1) {
  p.validate();
  require(sample_every >= 1, "sample_every must be >= 1");
  if (dt > max_step(p) * (1.0 + 1e-12))
    throw InvalidInput("dt=" + std::to_string(dt) + " exceeds the step bound " +
                       std::to_string(max_step(p)));
  const TimeGrid grid = TimeGrid::covering(t_end, dt);
  const Mat4c m = drift_matrix(p);
  const Mat4c n = noise_matrix(p);

  Vec4c mean = init.mean4();
  Mat4c v = init.second - mean * mean.transpose();
  Trajectory out;
  auto record = [&](long k) {
    MomentState s;
    s.t = grid.time(k);
    s.mean << mean(0), mean(2);
    s.second = v + mean * mean.transpose();
    detail::check_state(s, s.t);
    out.times.push_back(s.t);
    out.states.push_back(s);
  };
  record(0);
  for (long k = 1; k <= grid.steps; ++k) {
    mean = rk4_step(mean, grid.h, [&](const Vec4c& y) -> Vec4c { return m * y; });
    v = rk4_step(v, grid.h, [&](const Mat4c& y) -> Mat4c { return lyapunov_rhs(m, n, y); });
    if (!all_finite(v) || !mean.allFinite())
      throw NumericalError("moment integration overflow at t=" + std::to_string(grid.time(k)));
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    if (conjugation_defect(v) > 1e-10 * scale)
      throw NumericalError("conjugation symmetry broken at t=" + std::to_string(grid.time(k)));
    v = 0.5 * (v + conjugate_swap(v));
    mean(1) = std::conj(mean(0));
    mean(3) = std::conj(mean(2));
    if (k % sample_every == 0 || k == grid.steps) record(k);
  }
  return out;
}

inline void write_csv(std::ostream& os, const Trajectory& tr) {
  csv::header(os, {"t", "re_b", "im_b", "n_b", "re_bb", "im_bb", "n_a", "re_ab", "im_ab"});
  for (const MomentState& s : tr.states) {
    csv::row(os, {s.t, s.mean(1).real(), s.mean(1).imag(), s.n_b(), s.bb().real(), s.bb().imag(),
                  s.n_a(), s.ab().real(), s.ab().imag()});
  }
}

}  // namespace ptosc::moments
