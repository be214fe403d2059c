#pragma once

// Spectrum of the two-mode PT dimer
//   H = [[ω - iγ/2, μ], [μ, ω + iγ'/2]].

#include "ptosc/core.hpp"
#include "ptosc/csv.hpp"
#include "ptosc/params.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>
#include <vector>

namespace ptosc::pt {

struct PtSpectrum {
  cplx lambda_plus;
  cplx lambda_minus;
  double mu = 0.0;
};

/// λ₊ gets the larger real part; real parts within rounding (1e-9 relative)
/// count as equal and are ordered by imaginary part, so a solver's last-bit
/// noise below the EP cannot swap the branches.
inline std::pair<cplx, cplx> ordered(cplx x, cplx y) {
  const double tol = 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
  if (std::abs(x.real() - y.real()) <= tol) return x.imag() >= y.imag() ? std::pair{x, y} : std::pair{y, x};
  return x.real() > y.real() ? std::pair{x, y} : std::pair{y, x};
}

inline double exceptional_point(const PtDimerParams& p) {
  p.validate();
  return 0.25 * (p.gamma_loss + p.gamma_gain);
}

inline PtSpectrum eigenvalues(const PtDimerParams& p) {
  p.validate();
  const double c = 0.25 * (p.gamma_loss + p.gamma_gain);
  const cplx centre(p.omega, -0.25 * (p.gamma_loss - p.gamma_gain));
  const cplx root = std::sqrt(cplx(p.mu * p.mu - c * c, 0.0));
  const auto [lp, lm] = ordered(centre + root, centre - root);
  return {lp, lm, p.mu};
}

inline Mat2c hamiltonian(const PtDimerParams& p) {
  Mat2c h;
  h << cplx(p.omega, -0.5 * p.gamma_loss), p.mu, p.mu, cplx(p.omega, 0.5 * p.gamma_gain);
  return h;
}

/// Roots of the characteristic polynomial of an arbitrary 2x2 matrix,
/// (a+d)/2 ± sqrt(((a-d)/2)² + bc). Exact at the exceptional point, where an
/// iterative eigensolver loses half its digits.
inline std::pair<cplx, cplx> eigenvalues_2x2(const Mat2c& h) {
  const cplx half_tr = 0.5 * (h(0, 0) + h(1, 1));
  const cplx half_diff = 0.5 * (h(0, 0) - h(1, 1));
  const cplx root = std::sqrt(half_diff * half_diff + h(0, 1) * h(1, 0));
  return ordered(half_tr + root, half_tr - root);
}

inline PtSpectrum direct_eigenvalues(const PtDimerParams& p) {
  const auto [lp, lm] = eigenvalues_2x2(hamiltonian(p));
  return {lp, lm, p.mu};
}

/// Same spectrum from Eigen's QR-based complex eigensolver.
inline PtSpectrum iterative_eigenvalues(const PtDimerParams& p) {
  Eigen::ComplexEigenSolver<Mat2c> es(hamiltonian(p), false);
  const auto [lp, lm] = ordered(es.eigenvalues()(0), es.eigenvalues()(1));
  return {lp, lm, p.mu};
}

inline double deviation(const PtSpectrum& a, const PtSpectrum& b) {
  return std::max(std::abs(a.lambda_plus - b.lambda_plus), std::abs(a.lambda_minus - b.lambda_minus));
}

/// Closed-form spectrum over `mu_grid`; every point is checked against the
/// assembled matrix's characteristic roots to 1e-12 (relative to ω).
inline std::vector<PtSpectrum> sweep(PtDimerParams p, const std::vector<double>& mu_grid) {
  require(!mu_grid.empty(), "mu grid is empty");
  std::vector<PtSpectrum> out;
  out.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    p.mu = mu;
    const PtSpectrum s = eigenvalues(p);
    const double dev = deviation(s, direct_eigenvalues(p));
    if (dev > 1e-12 * std::max(1.0, p.omega))
      throw NumericalError("closed-form and direct spectra disagree at mu=" + std::to_string(mu));
    out.push_back(s);
  }
  return out;
}

/// Least-squares slope of log(d(Reλ₊ - Reλ₋)/dμ) against log(μ - μ_EP) on a
/// geometric grid of offsets [eps_min, eps_max] above the EP. Expected -1/2.
inline double bifurcation_exponent(PtDimerParams p, double eps_min, double eps_max, int points) {
  require(points >= 2 && eps_min > 0.0 && eps_max > eps_min, "bad bifurcation grid");
  const double ep = exceptional_point(p);
  auto split = [&](double mu) {
    p.mu = mu;
    const PtSpectrum s = eigenvalues(p);
    return s.lambda_plus.real() - s.lambda_minus.real();
  };
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < points; ++k) {
    const double eps = eps_min * std::pow(eps_max / eps_min, double(k) / double(points - 1));
    const double h = 1e-3 * eps;
    const double slope = (split(ep + eps + h) - split(ep + eps - h)) / (2.0 * h);
    const double x = std::log(eps), y = std::log(slope);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = points;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void write_csv(std::ostream& os, const std::vector<PtSpectrum>& spec) {
  csv::header(os, {"mu", "re_lp", "im_lp", "re_lm", "im_lm"});
  for (const auto& s : spec)
    csv::row(os, {s.mu, s.lambda_plus.real(), s.lambda_plus.imag(), s.lambda_minus.real(), s.lambda_minus.imag()});
}

}  // namespace ptosc::pt
