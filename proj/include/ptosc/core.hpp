#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ptosc {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix<cplx, 2, 2>;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;
using Vec2c = Eigen::Matrix<cplx, 2, 1>;
using Vec4c = Eigen::Matrix<cplx, 4, 1>;
using Mat2d = Eigen::Matrix2d;
using Mat4d = Eigen::Matrix4d;

inline constexpr cplx kI{0.0, 1.0};

/// Parameter or input outside the model's domain. Maps to CLI exit code 1.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration or linear-algebra failure. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!finite(cplx(m(i, j)))) return false;
  return true;
}

/// Uniform time grid of `steps` RK4 steps covering [0, t_end] with step <= dt_max.
struct TimeGrid {
  long steps = 0;
  double h = 0.0;

  static TimeGrid covering(double t_end, double dt_max) {
    require(t_end > 0.0, "t_end must be positive");
    require(dt_max > 0.0, "dt must be positive");
    TimeGrid g;
    g.steps = static_cast<long>(std::ceil(t_end / dt_max - 1e-9));
    if (g.steps < 1) g.steps = 1;
    g.h = t_end / static_cast<double>(g.steps);
    return g;
  }

  double time(long k) const { return static_cast<double>(k) * h; }
};

}  // namespace ptosc
