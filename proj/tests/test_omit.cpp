#include "ptosc/omit.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ptosc;
using namespace ptosc::omit;

namespace {

OmitParams fig5() { return {}; }

OmitParams dissipative() {
  OmitParams p = fig5();
  p.gamma_gain = 0.0;
  return p;
}

}  // namespace

TEST(SteadyState, Examples) {
  OmitParams p = fig5();
  const SteadyState s = steady_state(p);
  EXPECT_NEAR(std::norm(s.a0), 100.0 / (1.0 + 0.005625), 1e-10);
  EXPECT_NEAR(std::norm(s.a0), 99.44, 0.01);
  EXPECT_NEAR(s.q0, 2.0 * 5e-4 * std::norm(s.a0), 1e-15);
  EXPECT_NEAR(s.q0, 0.09944, 1e-5);
  EXPECT_EQ(s.beta.real(), 0.0);
  EXPECT_DOUBLE_EQ(s.beta.imag(), p.g0 * p.omega_m * s.q0);

  p.drive = 0.0;
  const SteadyState z = steady_state(p);
  EXPECT_EQ(z.a0, cplx(0.0));
  EXPECT_EQ(z.q0, 0.0);
  EXPECT_EQ(z.beta, cplx(0.0));

  p.drive = 20.0;
  const SteadyState d = steady_state(p);
  EXPECT_NEAR(std::norm(d.a0), 4.0 * std::norm(s.a0), 1e-9);
  EXPECT_NEAR(d.q0, 4.0 * s.q0, 1e-12);
}

TEST(Response, BareCavityWithoutPump) {
  OmitParams p = fig5();
  p.drive = 0.0;
  for (double d : {0.5, 0.9, 1.02, 1.3}) {
    const OmitResponse r = response(p, d);
    const cplx expect = 1.0 / cplx(0.5 * p.kappa, p.delta - d);
    EXPECT_LT(std::abs(r.a_plus - expect), 1e-13);
    EXPECT_LT(std::abs(r.chi - p.kappa * r.a_plus), 1e-15);
  }
}

TEST(Response, BalancedExactTransparency) {
  for (double g0 : {1e-5, 5e-4, 3e-3})
    for (double mu : {0.0, 0.02, 0.07}) {
      OmitParams p = fig5();
      p.g0 = g0;
      p.mu = mu;
      const OmitResponse r = response(p, p.omega_m_eff());
      EXPECT_LE(std::abs(r.chi.real()), 1e-12);
      EXPECT_LT(std::abs(r.chi - p.kappa / cplx(0.0, 2.0 * p.delta)), 1e-12);
    }
  EXPECT_NEAR(response(fig5(), 1.02).chi.imag(), -0.075, 1e-12);
}

TEST(Window, LocatedAtShiftedSideband) {
  const OmitParams p = fig5();
  const auto grid = centred_grid(p, 0.5, 2001);
  const double step = grid[1] - grid[0];
  const auto spec = spectrum(p, grid);
  const auto idx = window_index(spec);
  ASSERT_TRUE(idx.has_value());
  EXPECT_LE(std::abs(spec[*idx].delta_probe - (p.omega_m + p.mu)), step);
  EXPECT_DOUBLE_EQ(window_depth(spec), 1.0);
}

TEST(Window, DissipativeIsShallower) {
  const auto grid = centred_grid(fig5(), 0.5, 2001);
  const double bal = window_depth(spectrum(fig5(), grid));
  const double dis = window_depth(spectrum(dissipative(), grid));
  EXPECT_LT(dis, 0.5 * bal);
  EXPECT_GT(dis, 0.0);
}

TEST(Window, NoPumpNoWindow) {
  OmitParams p = fig5();
  p.drive = 0.0;
  EXPECT_EQ(window_depth(spectrum(p, centred_grid(p, 0.5, 2001))), 0.0);
  EXPECT_EQ(window_depth({}), 0.0);
}

TEST(Window, DepthMonotoneInCouplingAndDissipation) {
  const auto grid = centred_grid(fig5(), 0.5, 2001);
  OmitParams p = dissipative();
  double last = -1.0;
  for (double g0 : {2e-4, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2}) {
    p.g0 = g0;
    const double d = window_depth(spectrum(p, grid));
    EXPECT_GE(d, last - 1e-12) << g0;
    last = d;
  }
  p = fig5();
  last = 2.0;
  for (double gm : {0.0, 0.0025, 0.005, 0.0075, 0.01}) {
    p.gamma_gain = p.gamma - 2.0 * gm;
    const double d = window_depth(spectrum(p, grid));
    EXPECT_LE(d, last + 1e-12) << gm;
    last = d;
  }
}

TEST(RequiredCoupling, DissipativeNeedsStrongerCoupling) {
  const auto grid = centred_grid(fig5(), 0.5, 2001);
  const double target = 0.9;
  const double gd = required_coupling(dissipative(), target, grid);
  OmitParams p = dissipative();
  p.g0 = gd;
  EXPECT_GE(window_depth(spectrum(p, grid)), target);
  p.g0 = gd * 0.99;
  EXPECT_LT(window_depth(spectrum(p, grid)), target);
  EXPECT_LT(required_coupling(fig5(), target, grid), gd);
}

TEST(RequiredCoupling, SmallTargetsNeedLittleCoupling) {
  const auto grid = centred_grid(fig5(), 0.5, 2001);
  const double g1 = required_coupling(dissipative(), 0.5, grid);
  const double g2 = required_coupling(dissipative(), 0.2, grid);
  EXPECT_LT(g2, g1);
}

TEST(RequiredCoupling, Errors) {
  const auto grid = centred_grid(fig5(), 0.5, 2001);
  EXPECT_THROW(required_coupling(dissipative(), 1.0, grid), InvalidInput);
  EXPECT_THROW(required_coupling(dissipative(), 0.999, grid, {1e-7, 1e-5, 60}), NumericalError);
}

TEST(Grid, CentredOnShiftedSideband) {
  const auto g = centred_grid(fig5(), 0.5, 11);
  EXPECT_EQ(g[5], 1.02);
  EXPECT_THROW(centred_grid(fig5(), 0.5, 10), InvalidInput);
}

TEST(Csv, Header) {
  std::ostringstream os;
  write_csv(os, spectrum(fig5(), {0.9, 1.0}));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "delta,re_chi,im_chi");
}
