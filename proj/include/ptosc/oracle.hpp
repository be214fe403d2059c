#pragma once

// Brute-force reference: the master equations integrated on a truncated
// two-mode Fock space. Dense density matrix, sparse ladder operators, RK4.

#include "ptosc/core.hpp"
#include "ptosc/entanglement.hpp"
#include "ptosc/moments.hpp"
#include "ptosc/params.hpp"
#include "ptosc/rk4.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace ptosc::oracle {

using Dense = Eigen::MatrixXcd;
using Ket = Eigen::VectorXcd;
using Sparse = Eigen::SparseMatrix<cplx>;

enum class Model { Optomech, Dimer };

struct FockConfig {
  int cutoff_a = 12;  ///< levels kept in the first mode (cavity, or oscillator 1)
  int cutoff_b = 12;  ///< levels kept in the second mode
  Model model = Model::Optomech;
  double leakage_bound = 1e-6;
  long check_every = 50;  ///< steps between positivity/leakage checks

  void validate() const {
    require(cutoff_a >= 2 && cutoff_b >= 2, "Fock cutoffs must be >= 2");
    require(check_every >= 1, "check_every must be >= 1");
  }
  int dim() const { return cutoff_a * cutoff_b; }
};

inline Sparse lowering(int n) {
  Sparse a(n, n);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(double(k)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

inline Sparse identity(int n) {
  Sparse i(n, n);
  i.setIdentity();
  return i;
}

inline Sparse kron(const Sparse& x, const Sparse& y) {
  Sparse out(x.rows() * y.rows(), x.cols() * y.cols());
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < x.outerSize(); ++i)
    for (Sparse::InnerIterator ix(x, i); ix; ++ix)
      for (int j = 0; j < y.outerSize(); ++j)
        for (Sparse::InnerIterator iy(y, j); iy; ++iy)
          t.emplace_back(ix.row() * y.rows() + iy.row(), ix.col() * y.cols() + iy.col(), ix.value() * iy.value());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

/// Ladder operators of both modes on the product space (first mode is the slow index).
struct Ladders {
  Sparse a, b;
  explicit Ladders(const FockConfig& c)
      : a(kron(lowering(c.cutoff_a), identity(c.cutoff_b))), b(kron(identity(c.cutoff_a), lowering(c.cutoff_b))) {}
};

struct Channel {
  double rate;
  Sparse op;
};

/// dρ/dt = -i[H,ρ] + Σ rate·(LρL† - ½{L†L,ρ}). Rates may be negative (gain).
struct Lindbladian {
  Sparse h;
  std::vector<Channel> channels;
  Sparse heff;  ///< H - (i/2) Σ rate L†L

  void finalize() {
    heff = h;
    for (const auto& c : channels) heff -= cplx(0.0, 0.5 * c.rate) * Sparse(c.op.adjoint() * c.op);
  }

  Dense apply(const Dense& rho) const {
    const Dense hr = heff * rho;
    Dense out = cplx(0.0, -1.0) * hr;
    out += cplx(0.0, 1.0) * hr.adjoint();
    for (const auto& c : channels) {
      if (c.rate == 0.0) continue;
      const Dense lr = c.op * rho;
      out += c.rate * (lr * c.op.adjoint());
    }
    return out;
  }
};

inline Lindbladian optomech_lindbladian(const FockConfig& cfg, const SystemParams& p) {
  p.validate();
  const Ladders l(cfg);
  const Sparse ad = l.a.adjoint(), bd = l.b.adjoint();
  Lindbladian L;
  L.h = -p.delta * Sparse(ad * l.a) + p.omega_m * Sparse(bd * l.b) + p.g_lin * Sparse(ad * bd + l.a * l.b);
  L.channels = {{p.kappa, l.a}, {p.gamma * (p.n_th + 1.0), l.b}, {p.gamma * p.n_th, bd}};
  L.finalize();
  return L;
}

inline Lindbladian dimer_lindbladian(const FockConfig& cfg, const PtDimerParams& p) {
  p.validate();
  const Ladders l(cfg);
  const Sparse b1 = l.a, b2 = l.b;
  const Sparse b1d = b1.adjoint(), b2d = b2.adjoint();
  Lindbladian L;
  L.h = p.omega * Sparse(b1d * b1 + b2d * b2) + p.mu * Sparse(b1d * b2 + b2d * b1);
  L.channels = {{p.gamma_loss * (p.n_th_loss + 1.0), b1},
                {p.gamma_loss * p.n_th_loss, b1d},
                {-p.gamma_gain * (p.n_th_gain + 1.0), b2},
                {-p.gamma_gain * p.n_th_gain, b2d}};
  L.finalize();
  return L;
}

// --- initial states ---------------------------------------------------------

inline Ket coherent_ket(int n, cplx alpha) {
  Ket k(n);
  cplx c = 1.0;
  for (int j = 0; j < n; ++j) {
    if (j > 0) c *= alpha / std::sqrt(double(j));
    k(j) = c;
  }
  return k / k.norm();
}

inline Ket product_ket(const Ket& x, const Ket& y) {
  Ket k(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) k.segment(i * y.size(), y.size()) = x(i) * y;
  return k;
}

/// (1/cosh r) Σ (-tanh r)^n |n,n>, truncated and renormalized.
inline Ket tmsv_ket(const FockConfig& cfg, double r) {
  Ket k = Ket::Zero(cfg.dim());
  const int n = std::min(cfg.cutoff_a, cfg.cutoff_b);
  for (int j = 0; j < n; ++j) k(j * cfg.cutoff_b + j) = std::pow(-std::tanh(r), j) / std::cosh(r);
  return k / k.norm();
}

inline Dense thermal_density(int n, double nbar) {
  Dense rho = Dense::Zero(n, n);
  const double q = nbar / (1.0 + nbar);
  for (int j = 0; j < n; ++j) rho(j, j) = std::pow(q, j) / (1.0 + nbar);
  return rho / rho.trace();
}

inline Dense kron_dense(const Dense& x, const Dense& y) {
  Dense out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

inline Dense pure_density(const Ket& k) { return k * k.adjoint(); }

// --- evolution ---------------------------------------------------------------

struct Diagnostics {
  double max_trace_error = 0.0;  ///< max |Tr ρ - 1| over checked steps
  double min_eigenvalue = 0.0;   ///< smallest eigenvalue of ρ seen
  double max_leakage = 0.0;      ///< largest top-level population of either mode
  double max_hermiticity_error = 0.0;
};

struct FockRun {
  std::vector<double> times;
  std::vector<Dense> states;
  Diagnostics diag;
};

/// Population of the highest retained level of each mode, whichever is larger.
inline double leakage(const FockConfig& cfg, const Dense& rho) {
  double top_a = 0.0, top_b = 0.0;
  for (int i = 0; i < cfg.cutoff_a; ++i)
    for (int j = 0; j < cfg.cutoff_b; ++j) {
      const double p = rho(i * cfg.cutoff_b + j, i * cfg.cutoff_b + j).real();
      if (i == cfg.cutoff_a - 1) top_a += p;
      if (j == cfg.cutoff_b - 1) top_b += p;
    }
  return std::max(top_a, top_b);
}

inline double min_eigenvalue(const Dense& rho) {
  const Dense herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Dense> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// RK4 on ρ; states are stored every `sample_every` steps. Throws when the
/// truncation leaks more than cfg.leakage_bound or ρ becomes non-finite.
inline FockRun fock_evolve(const FockConfig& cfg, const Lindbladian& L, const Dense& rho0, double t_end, double dt,
                           long sample_every = 1) {
  cfg.validate();
  require(rho0.rows() == cfg.dim() && rho0.cols() == cfg.dim(), "initial density has the wrong dimension");
  require(sample_every >= 1, "sample_every must be >= 1");
  const TimeGrid grid = TimeGrid::covering(t_end, dt);
  Dense rho = rho0;
  FockRun run;
  run.diag.min_eigenvalue = min_eigenvalue(rho);
  auto inspect = [&](long k) {
    if (!rho.allFinite()) throw NumericalError("Fock integration produced NaN/Inf at t=" + std::to_string(grid.time(k)));
    auto& d = run.diag;
    d.max_trace_error = std::max(d.max_trace_error, std::abs(rho.trace() - 1.0));
    d.max_hermiticity_error = std::max(d.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    d.min_eigenvalue = std::min(d.min_eigenvalue, min_eigenvalue(rho));
    d.max_leakage = std::max(d.max_leakage, leakage(cfg, rho));
    if (d.max_leakage > cfg.leakage_bound)
      throw NumericalError("Fock truncation leaked " + std::to_string(d.max_leakage) + " at t=" +
                           std::to_string(grid.time(k)) + "; raise the cutoff");
  };
  auto record = [&](long k) {
    run.times.push_back(grid.time(k));
    run.states.push_back(rho);
  };
  inspect(0);
  record(0);
  for (long k = 1; k <= grid.steps; ++k) {
    rho = rk4_step(rho, grid.h, [&](const Dense& r) -> Dense { return L.apply(r); });
    const bool sample = k % sample_every == 0 || k == grid.steps;
    if (sample || k % cfg.check_every == 0) inspect(k);
    if (sample) record(k);
  }
  return run;
}

// --- observables ---------------------------------------------------------------

/// Named complex observables sampled on a common time grid.
struct ExpectationTrace {
  std::vector<double> times;
  std::map<std::string, std::vector<cplx>> series;
};

inline cplx expect(const Dense& rho, const Sparse& op) { return (op * rho).trace(); }

inline ExpectationTrace optomech_expectations(const FockConfig& cfg, const FockRun& run) {
  const Ladders l(cfg);
  const Sparse nb = l.b.adjoint() * l.b, na = l.a.adjoint() * l.a, bb = l.b * l.b, ab = l.a * l.b;
  ExpectationTrace tr;
  tr.times = run.times;
  for (const auto& rho : run.states) {
    tr.series["b"].push_back(expect(rho, l.b));
    tr.series["n_b"].push_back(expect(rho, nb));
    tr.series["bb"].push_back(expect(rho, bb));
    tr.series["n_a"].push_back(expect(rho, na));
    tr.series["ab"].push_back(expect(rho, ab));
  }
  return tr;
}

inline ExpectationTrace optomech_expectations(const moments::Trajectory& t) {
  ExpectationTrace tr;
  tr.times = t.times;
  for (const auto& s : t.states) {
    tr.series["b"].push_back(s.mean(1));
    tr.series["n_b"].push_back(s.n_b());
    tr.series["bb"].push_back(s.bb());
    tr.series["n_a"].push_back(s.n_a());
    tr.series["ab"].push_back(s.ab());
  }
  return tr;
}

/// Second-moment matrix over (b₁†, b₁, b₂†, b₂) read off a density matrix.
/// <b_k b_k†> is taken as <b_k†b_k> + 1, which the truncated product misses.
inline Mat4c dimer_moments(const FockConfig& cfg, const Dense& rho) {
  const Ladders l(cfg);
  const std::array<Sparse, 4> u{Sparse(l.a.adjoint()), l.a, Sparse(l.b.adjoint()), l.b};
  Mat4c m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = expect(rho, Sparse(u[i] * u[j]));
  m(1, 0) = m(0, 1) + 1.0;
  m(3, 2) = m(2, 3) + 1.0;
  return m;
}

inline ExpectationTrace dimer_expectations(const FockConfig& cfg, const FockRun& run) {
  ExpectationTrace tr;
  tr.times = run.times;
  for (std::size_t k = 0; k < run.states.size(); ++k) {
    const Mat4c m = dimer_moments(cfg, run.states[k]);
    entanglement::DimerMomentState s{run.times[k], m};
    tr.series["n1"].push_back(m(0, 1));
    tr.series["n2"].push_back(m(2, 3));
    tr.series["b1b2"].push_back(m(1, 3));
    tr.series["b1d_b2"].push_back(m(0, 3));
    tr.series["En"].push_back(entanglement::log_negativity(entanglement::to_covariance(s)));
  }
  return tr;
}

inline ExpectationTrace dimer_expectations(const std::vector<entanglement::DimerMomentState>& states) {
  ExpectationTrace tr;
  for (const auto& s : states) {
    tr.times.push_back(s.t);
    tr.series["n1"].push_back(s.U(0, 1));
    tr.series["n2"].push_back(s.U(2, 3));
    tr.series["b1b2"].push_back(s.U(1, 3));
    tr.series["b1d_b2"].push_back(s.U(0, 3));
    tr.series["En"].push_back(entanglement::log_negativity(entanglement::to_covariance(s)));
  }
  return tr;
}

/// Per observable: max_t |o - m| / max(1, max_t |m|). Observables missing from
/// either trace are skipped.
inline std::map<std::string, double> compare(const ExpectationTrace& oracle, const ExpectationTrace& model) {
  require(oracle.times.size() == model.times.size(), "compare: traces have different lengths");
  for (std::size_t k = 0; k < oracle.times.size(); ++k)
    require(std::abs(oracle.times[k] - model.times[k]) <= 1e-9 * std::max(1.0, std::abs(oracle.times[k])),
            "compare: time grids differ at sample " + std::to_string(k));
  std::map<std::string, double> out;
  for (const auto& [name, o] : oracle.series) {
    const auto it = model.series.find(name);
    if (it == model.series.end()) continue;
    const auto& m = it->second;
    double diff = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < o.size(); ++k) {
      diff = std::max(diff, std::abs(o[k] - m[k]));
      scale = std::max(scale, std::abs(m[k]));
    }
    out[name] = diff / scale;
  }
  return out;
}

}  // namespace ptosc::oracle
