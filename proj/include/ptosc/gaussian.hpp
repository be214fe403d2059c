#pragma once

#include "ptosc/core.hpp"

#include <Eigen/Eigenvalues>

namespace ptosc {

/// Block-diagonal symplectic form J ⊕ J ⊕ ... with J = [[0, 1], [-1, 0]].
inline Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    s(2 * k, 2 * k + 1) = 1.0;
    s(2 * k + 1, 2 * k) = -1.0;
  }
  return s;
}

/// Smallest eigenvalue of C + (i/2)Σ. Nonnegative exactly for physical states
/// (vacuum variance 1/2 convention).
inline double uncertainty_margin(const Eigen::MatrixXd& cov) {
  const int modes = static_cast<int>(cov.rows() / 2);
  const Eigen::MatrixXcd h = cov.cast<cplx>() + 0.5 * kI * symplectic_form(modes).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Moments of one bosonic mode: <b>, <b†b>, <bb>.
struct OscillatorMoments {
  cplx b{0.0, 0.0};
  double n = 0.0;
  cplx bb{0.0, 0.0};
};

/// Mean and 2x2 covariance over (x, p) with x = (b+b†)/√2, p = i(b†-b)/√2.
struct SingleModeGaussian {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Mat2d cov = 0.5 * Mat2d::Identity();
};

inline SingleModeGaussian to_gaussian(const OscillatorMoments& m) {
  const double var = m.n - std::norm(m.b);    // <δb†δb>
  const cplx anom = m.bb - m.b * m.b;          // <δbδb>
  SingleModeGaussian g;
  g.mean << std::sqrt(2.0) * m.b.real(), std::sqrt(2.0) * m.b.imag();
  g.cov(0, 0) = anom.real() + var + 0.5;
  g.cov(1, 1) = -anom.real() + var + 0.5;
  g.cov(0, 1) = g.cov(1, 0) = anom.imag();
  return g;
}

}  // namespace ptosc
