#include "ptosc/params.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ptosc;

namespace {

SystemParams fig2() { return {1.0, 0.1, 1e-5, 3.0, 0.04, 1000.0}; }

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemParams p;
  p.omega_m = 0.2 + 2.0 * u(rng);
  p.kappa = std::pow(10.0, -3.0 + 3.0 * u(rng));
  p.gamma = std::pow(10.0, -7.0 + 5.0 * u(rng));
  p.delta = -1.0 + 6.0 * u(rng);
  p.g_lin = 0.2 * u(rng);
  p.n_th = 2000.0 * u(rng);
  return p;
}

}  // namespace

TEST(EffectiveParams, UncoupledOscillatorIsBare) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 1000; ++k) {
    SystemParams p = random_params(rng);
    p.g_lin = 0.0;
    const EffectiveParams e = effective_params(p);
    EXPECT_EQ(e.gamma_eff, p.gamma);
    EXPECT_EQ(e.omega_eff, p.omega_m);
    EXPECT_EQ(e.heating_rate, p.gamma * p.n_th);
  }
}

TEST(EffectiveParams, Fig2Arithmetic) {
  const EffectiveParams e = effective_params(fig2());
  // D = 4*2^2 + 0.01 = 16.01
  EXPECT_NEAR(e.gamma_eff, 1e-5 - 6.4e-4 / 16.01, 1e-18);
  EXPECT_NEAR(e.gamma_eff, -2.9975e-5, 1e-9);
  EXPECT_NEAR(e.omega_eff, 1.0 + 0.0128 / 16.01, 1e-15);
  EXPECT_NEAR(e.omega_eff, 1.0007995, 1e-7);
  EXPECT_NEAR(e.heating_rate, 1e-2 + 3.9975e-5, 1e-9);
  ASSERT_TRUE(e.n_th_eff.has_value());
  EXPECT_NEAR(*e.n_th_eff * e.gamma_eff, e.heating_rate, 1e-15);
  EXPECT_LT(*e.n_th_eff, 0.0);
}

TEST(EffectiveParams, ZeroDissipationLeavesBathOccupationUndefined) {
  // Δ = ω, κ = 1: D = 1 and 4G²κ/D = 1 = γ exactly.
  const SystemParams p{1.0, 1.0, 1.0, 1.0, 0.5, 3.0};
  const EffectiveParams e = effective_params(p);
  EXPECT_EQ(e.gamma_eff, 0.0);
  EXPECT_FALSE(e.n_th_eff.has_value());
  EXPECT_DOUBLE_EQ(e.heating_rate, 4.0);
}

TEST(EffectiveParams, HeatingRateNeverNegative) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 1000; ++k) EXPECT_GE(effective_params(random_params(rng)).heating_rate, 0.0);
}

TEST(EffectiveParams, DissipationDecreasesWithCoupling) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 1000; ++k) {
    SystemParams p = random_params(rng);
    p.g_lin = 0.01 + 0.1 * (k % 10) / 10.0;
    const double g1 = effective_params(p).gamma_eff;
    p.g_lin *= 1.05;
    EXPECT_LT(effective_params(p).gamma_eff, g1);
  }
}

TEST(BalanceCoupling, Examples) {
  const SystemParams p = fig2();
  EXPECT_EQ(balance_coupling(p, -p.gamma), 0.0);
  EXPECT_NEAR(balance_coupling(p, p.gamma), std::sqrt(2e-5 * 16.01 / 0.4), 1e-15);
  EXPECT_NEAR(balance_coupling(p, p.gamma), 0.028293, 1e-6);
  EXPECT_NEAR(balance_coupling(p, 0.0), std::sqrt(1e-5 * 16.01 / 0.4), 1e-15);
  EXPECT_THROW(balance_coupling(p, -2.0 * p.gamma), InvalidInput);
}

TEST(BalanceCoupling, RoundTrip) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 20.0);
  for (int k = 0; k < 1000; ++k) {
    SystemParams p = random_params(rng);
    const double target = u(rng) * p.gamma;
    p.g_lin = balance_coupling(p, target);
    const double err = std::abs(effective_params(p).gamma_eff + target);
    EXPECT_LE(err, 1e-12 * std::max(p.gamma, std::abs(target))) << k;
  }
}

TEST(ModifiedInitial, Examples) {
  const SystemParams p = fig2();
  InitialMoments hot;
  hot.n_b = 1000.0;
  hot.b_mean = std::sqrt(1000.0);
  hot.bb = 1000.0;
  const InitialMoments a = modified_initial(p, hot);
  EXPECT_NEAR(a.n_b, (1.0 + 0.0128 / 16.01) * 1000.0, 1e-10);
  EXPECT_NEAR(a.n_b, 1000.7995, 1e-4);
  EXPECT_NEAR(std::abs(a.b_mean), std::sqrt(a.n_b), 1e-12);
  EXPECT_NEAR(std::abs(a.bb - a.b_mean * a.b_mean), 0.0, 1e-9);

  InitialMoments cav;
  cav.n_a = 1.0;
  EXPECT_NEAR(modified_initial(p, cav).n_b, 0.0064 / 16.01, 1e-17);
}

TEST(ModifiedInitial, UncoupledIsIdentity) {
  SystemParams p = fig2();
  p.g_lin = 0.0;
  InitialMoments in;
  in.b_mean = {2.0, -1.0};
  in.n_b = 7.0;
  in.bb = {1.0, 3.0};
  in.n_a = 2.0;
  in.ab = {0.5, 0.1};
  const InitialMoments out = modified_initial(p, in);
  EXPECT_EQ(out.n_b, in.n_b);
  EXPECT_EQ(out.b_mean, in.b_mean);
  EXPECT_EQ(out.bb, in.bb);
}

TEST(ModifiedInitial, RejectsNegativeResult) {
  const SystemParams p = fig2();
  InitialMoments in;
  in.n_b = 1.0;
  in.ab = 1000.0;
  EXPECT_THROW(modified_initial(p, in), InvalidInput);
}

TEST(SystemParams, Validation) {
  SystemParams p = fig2();
  EXPECT_NO_THROW(p.validate());
  p.kappa = 0.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = fig2();
  p.g_lin = -0.1;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = fig2();
  p.n_th = -1.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = fig2();
  p.gamma = std::nan("");
  EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(SystemParams, TrustFlag) {
  SystemParams p = fig2();
  EXPECT_TRUE(p.elimination_trusted());
  p.kappa = 5e-5;  // κ < 10γ
  p.delta = 1.1;   // |Δ - ω| = 0.1 < 10G
  EXPECT_FALSE(p.elimination_trusted());
}

TEST(PtDimerParams, Validation) {
  PtDimerParams d;
  EXPECT_NO_THROW(d.validate());
  EXPECT_DOUBLE_EQ(d.gamma_eff(), 0.0);
  d.mu = -1.0;
  EXPECT_THROW(d.validate(), InvalidInput);
  d = {};
  d.gamma_gain = -0.1;
  EXPECT_THROW(d.validate(), InvalidInput);
}
