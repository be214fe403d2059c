#pragma once

namespace ptosc {

/// One classical fourth-order Runge-Kutta step for an autonomous linear or
/// nonlinear flow dy/dt = f(y). State must support +, and scalar *.
template <typename State, typename Rhs>
State rk4_step(const State& y, double h, Rhs&& f) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * h) * k1));
  const State k3 = f(State(y + (0.5 * h) * k2));
  const State k4 = f(State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace ptosc
