#include "ptosc/oracle.hpp"

#include <gtest/gtest.h>

using namespace ptosc;
using namespace ptosc::oracle;

namespace {

FockConfig square(int n, Model m) {
  FockConfig c;
  c.cutoff_a = c.cutoff_b = n;
  c.model = m;
  return c;
}

Dense product_coherent(const FockConfig& c, cplx a, cplx b) {
  return pure_density(product_ket(coherent_ket(c.cutoff_a, a), coherent_ket(c.cutoff_b, b)));
}

}  // namespace

TEST(Operators, LadderAlgebra) {
  const Dense a = Dense(lowering(6));
  const Dense comm = a * a.adjoint() - a.adjoint() * a;
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(comm(k, k).real(), 1.0, 1e-15);
  EXPECT_NEAR(comm(5, 5).real(), -5.0, 1e-15);  // truncation artefact at the top level
  const Ladders l(square(3, Model::Optomech));
  EXPECT_LT((Dense(l.a * l.b) - Dense(l.b * l.a)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(States, Normalization) {
  const FockConfig c = square(14, Model::Dimer);
  EXPECT_NEAR(coherent_ket(20, cplx(1.0, 0.5)).norm(), 1.0, 1e-15);
  EXPECT_NEAR(tmsv_ket(c, 0.3).norm(), 1.0, 1e-15);
  EXPECT_NEAR(thermal_density(30, 0.7).trace().real(), 1.0, 1e-15);
  const Dense rho = kron_dense(thermal_density(4, 0.3), thermal_density(5, 0.2));
  EXPECT_EQ(rho.rows(), 20);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
}

TEST(Leakage, TopLevelPopulation) {
  FockConfig c;
  c.cutoff_a = 3;
  c.cutoff_b = 4;
  Ket k = Ket::Zero(12);
  k(2 * 4 + 1) = 1.0;  // |2, 1>
  EXPECT_DOUBLE_EQ(leakage(c, pure_density(k)), 1.0);
  k.setZero();
  k(0) = 1.0;
  EXPECT_DOUBLE_EQ(leakage(c, pure_density(k)), 0.0);
}

TEST(FockEvolve, MechanicalThermalization) {
  FockConfig c;
  c.cutoff_a = 2;
  c.cutoff_b = 20;
  const SystemParams p{1.0, 1.0, 0.1, 3.0, 0.0, 0.5};
  const auto run = fock_evolve(c, optomech_lindbladian(c, p), product_coherent(c, 0.0, 0.0), 5.0, 0.005, 100);
  const auto tr = optomech_expectations(c, run);
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    EXPECT_NEAR(tr.series.at("n_b")[k].real(), 0.5 * (1.0 - std::exp(-0.1 * tr.times[k])), 1e-5);
}

TEST(FockEvolve, CavityDecayAndRotation) {
  const FockConfig c = square(14, Model::Optomech);
  const SystemParams p{1.0, 0.4, 0.0, 2.0, 0.0, 0.0};
  const cplx b0(0.8, 0.0);
  const auto run = fock_evolve(c, optomech_lindbladian(c, p), product_coherent(c, 1.0, b0), 4.0, 0.005, 200);
  const auto tr = optomech_expectations(c, run);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    EXPECT_NEAR(tr.series.at("n_a")[k].real(), std::exp(-0.4 * t), 1e-6);
    EXPECT_LT(std::abs(tr.series.at("b")[k] - b0 * std::exp(cplx(0.0, -t))), 1e-6);
  }
}

TEST(FockEvolve, TracePreservedAndPositive) {
  const FockConfig c = square(10, Model::Optomech);
  const SystemParams p{1.0, 1.0, 0.05, 3.0, 0.08, 0.2};
  const auto run = fock_evolve(c, optomech_lindbladian(c, p), product_coherent(c, 0.0, 0.5), 3.0, 0.002, 100);
  EXPECT_LT(run.diag.max_trace_error, 1e-10);
  EXPECT_GT(run.diag.min_eigenvalue, -1e-9);
  EXPECT_LT(run.diag.max_hermiticity_error, 1e-12);
  EXPECT_LT(run.diag.max_leakage, 1e-6);
}

TEST(FockEvolve, LeakageIsRejected) {
  const FockConfig c = square(4, Model::Optomech);
  const SystemParams p{1.0, 1.0, 0.01, 3.0, 0.05, 0.0};
  EXPECT_THROW(fock_evolve(c, optomech_lindbladian(c, p), product_coherent(c, 0.0, 1.5), 0.1, 0.002), NumericalError);
}

TEST(FockEvolve, RejectsWrongDimension) {
  const FockConfig c = square(4, Model::Optomech);
  const SystemParams p{1.0, 1.0, 0.01, 3.0, 0.05, 0.0};
  EXPECT_THROW(fock_evolve(c, optomech_lindbladian(c, p), Dense::Identity(4, 4), 0.1, 0.002), InvalidInput);
}

TEST(Agreement, OptomechMomentsMatchFockSpace) {
  const FockConfig c = square(12, Model::Optomech);
  const SystemParams p{1.0, 1.0, 0.01, 3.0, 0.05, 0.0};
  const cplx b0(0.6, 0.0);
  const auto run = fock_evolve(c, optomech_lindbladian(c, p), product_coherent(c, 0.0, b0), 5.0, 0.002, 50);
  const auto mom = moments::evolve(p, moments::coherent_state(0.0, b0), 5.0, 0.002, 50);
  const auto dev = compare(optomech_expectations(c, run), optomech_expectations(mom));
  ASSERT_EQ(dev.size(), 5u);
  for (const auto& [k, v] : dev) EXPECT_LT(v, 1e-8) << k;
  EXPECT_GT(run.diag.min_eigenvalue, -1e-10);
}

TEST(Agreement, DimerMomentsMatchFockSpace) {
  const FockConfig c = square(10, Model::Dimer);
  const PtDimerParams p{1.0, 0.004, 0.004, 0.02, 0.0, -1.0};
  const auto run = fock_evolve(c, dimer_lindbladian(c, p), pure_density(tmsv_ket(c, 0.05)), 50.0, 0.01, 50);
  const auto mom = entanglement::evolve_dimer(p, entanglement::tmsv_initial(0.05), 50.0, 0.01, 50);
  const auto dev = compare(dimer_expectations(c, run), dimer_expectations(mom));
  ASSERT_EQ(dev.size(), 5u);
  for (const auto& [k, v] : dev) EXPECT_LT(v, 1e-6) << k;
  EXPECT_GT(run.diag.min_eigenvalue, -1e-9);
  EXPECT_LT(run.diag.max_trace_error, 1e-10);
}

// Zero-occupancy gain is not completely positive, so only the moments are compared.
TEST(Agreement, DimerZeroGainOccupancyMomentsStillAgree) {
  const FockConfig c = square(8, Model::Dimer);
  const PtDimerParams p{1.0, 0.004, 0.004, 0.02, 0.0, 0.0};
  const auto run = fock_evolve(c, dimer_lindbladian(c, p), pure_density(tmsv_ket(c, 0.05)), 20.0, 0.01, 100);
  const auto mom = entanglement::evolve_dimer(p, entanglement::tmsv_initial(0.05), 20.0, 0.01, 100);
  auto o = dimer_expectations(c, run), m = dimer_expectations(mom);
  o.series.erase("En");
  m.series.erase("En");
  for (const auto& [k, v] : compare(o, m)) EXPECT_LT(v, 1e-6) << k;
}

TEST(Compare, Examples) {
  ExpectationTrace a{{0.0, 1.0}, {{"x", {1.0, 2.0}}, {"y", {0.0, 0.0}}}};
  EXPECT_EQ(compare(a, a).at("x"), 0.0);
  ExpectationTrace b = a;
  b.series["y"] = {0.25, 0.25};
  b.series.erase("x");
  const auto d = compare(a, b);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d.at("y"), 0.25);
  ExpectationTrace big{{0.0, 1.0}, {{"x", {10.0, 20.0}}}};
  ExpectationTrace shifted{{0.0, 1.0}, {{"x", {11.0, 21.0}}}};
  EXPECT_DOUBLE_EQ(compare(shifted, big).at("x"), 1.0 / 20.0);
  ExpectationTrace other{{0.0, 2.0}, {{"x", {1.0, 2.0}}}};
  EXPECT_THROW(compare(a, other), InvalidInput);
}
