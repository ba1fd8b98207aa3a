#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dsheat/bounds.hpp"
#include "dsheat/errors.hpp"
#include "dsheat/experiments.hpp"
#include "oracles.hpp"

using namespace dsheat;

TEST(InitialField, Shapes) {
  EXPECT_EQ(initial_field(2, InitShape::PointMass, 0.3), Field::point({0, 0}, 0.3));
  const Field b = initial_field(1, InitShape::Box, 0.1, 3);
  EXPECT_EQ(b.box(), (Box{{-1}, {3}}));
  EXPECT_NEAR(l1_norm(b), 0.3, 1e-16);
  const Field e = initial_field(2, InitShape::Box, 0.1, 4);
  EXPECT_EQ(e.box(), (Box{{-1, -1}, {4, 4}}));
  EXPECT_THROW(initial_field(1, InitShape::Box, 0.1, 0), DomainError);
  EXPECT_THROW(initial_field(1, InitShape::PointMass, -1.0), DomainError);
}

TEST(Sweep, SmallGrid) {
  SweepSpec spec;
  spec.d = 1;
  spec.alphas = {1.0, 3.0};
  spec.epsilons = {0.5, 0.1};
  spec.horizon = 3000;
  spec.threads = 2;
  const SweepResult r = fujita_sweep(spec);
  ASSERT_EQ(r.cells.size(), 4u);

  const SweepCell& sub = r.at(0, 0);
  EXPECT_EQ(sub.outcome, Outcome::BlewUp);
  ASSERT_TRUE(sub.sub_bound_tau.has_value());
  EXPECT_LE(*sub.blowup_tau, *sub.sub_bound_tau);
  EXPECT_EQ(sub.super_certificate, SuperCertificate::None);

  const SweepCell& sup = r.at(1, 1);
  EXPECT_EQ(sup.outcome, Outcome::SurvivedHorizon);
  EXPECT_LT(sup.peak_sup_g, 1.0);
  EXPECT_LT(sup.m_prefix, 1.0);
  EXPECT_NE(sup.super_certificate, SuperCertificate::None);

  for (const auto& [alpha, ok] : r.monotone_in_epsilon) EXPECT_TRUE(ok) << alpha;
  ASSERT_EQ(r.boundaries.size(), 2u);
  EXPECT_EQ(r.boundaries[1].largest_alpha_blown_up, 1.0);
  EXPECT_EQ(r.boundaries[1].smallest_alpha_survived, 3.0);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  SweepSpec spec;
  spec.d = 1;
  spec.alphas = {0.5, 1.0, 2.0};
  spec.epsilons = {0.3, 0.2};
  spec.horizon = 500;
  const SweepResult a = fujita_sweep(spec);
  spec.threads = 3;
  const SweepResult b = fujita_sweep(spec);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].outcome_tau, b.cells[i].outcome_tau);
    EXPECT_EQ(a.cells[i].final_l1, b.cells[i].final_l1);
    EXPECT_EQ(a.cells[i].m_prefix, b.cells[i].m_prefix);
  }
}

TEST(Sweep, ValidatesSpec) {
  SweepSpec spec;
  spec.alphas = {1.0};
  EXPECT_THROW(fujita_sweep(spec), DomainError);
  spec.epsilons = {0.0};
  EXPECT_THROW(fujita_sweep(spec), DomainError);
}

TEST(Sweep, BudgetExhaustionIsPerCell) {
  SweepSpec spec;
  spec.d = 2;
  spec.alphas = {2.0};
  spec.epsilons = {0.01};
  spec.horizon = 1000;
  spec.cell_budget = 400;
  const SweepResult r = fujita_sweep(spec);
  EXPECT_EQ(r.cells[0].outcome, Outcome::BudgetExhausted);
}

TEST(Sweep, CertificateNames) {
  EXPECT_EQ(to_string(SuperCertificate::None), "none");
  EXPECT_EQ(to_string(SuperCertificate::ProvedAtHorizon), "proved_at_horizon");
  EXPECT_EQ(to_string(SuperCertificate::ExtrapolatedGlobal), "extrapolated_global");
}

TEST(PowerTail, SyntheticPowerLaw) {
  // m = 2 tau^-1/2 and alpha = 3: the tail sum of 8 k^-3/2 beyond N is
  // bounded by the integral 16 N^-1/2.
  std::vector<std::pair<std::int64_t, double>> samples;
  for (std::int64_t t = 100; t <= 1000; t += 50) samples.emplace_back(t, 2.0 / std::sqrt(static_cast<double>(t)));
  EXPECT_NEAR(power_tail_estimate(samples, 3.0, 1000), 16.0 / std::sqrt(1000.0), 1e-10);
  EXPECT_TRUE(std::isinf(power_tail_estimate(samples, 2.0, 1000)));
  EXPECT_TRUE(std::isinf(power_tail_estimate({{1000, 0.1}}, 3.0, 1000)));
}

TEST(Critical, BoundValues) {
  EXPECT_NEAR(critical_l1_bound_4pi(1), std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(critical_l1_bound_4pi(1), 1.77245, 1e-5);
  EXPECT_NEAR(critical_l1_bound_clt(1), std::sqrt(std::numbers::pi / 2.0), 1e-15);
  EXPECT_NEAR(critical_l1_bound_4pi(2), std::numbers::pi, 1e-14);
}

TEST(Critical, LargeDataEvent) {
  const CriticalReport r = critical_case_study(1, {0.9}, 20000);
  ASSERT_EQ(r.cases.size(), 1u);
  const CriticalCase& c = r.cases[0];
  EXPECT_TRUE(c.event == CriticalEvent::BlewUp || c.event == CriticalEvent::BoundExceeded);
  EXPECT_EQ(r.alpha, 2.0);
  ASSERT_FALSE(c.trajectory.empty());
  EXPECT_EQ(c.trajectory.front().tau, 0);
  EXPECT_EQ(c.trajectory.front().l1, 0.9);
  EXPECT_EQ(c.trajectory.back().tau, c.last_tau);
  if (c.exceed_tau_4pi && c.exceed_tau_clt) {
    EXPECT_LE(*c.exceed_tau_clt, *c.exceed_tau_4pi);
  }
}

TEST(Critical, StopAtExceedance) {
  const CriticalReport r = critical_case_study(1, {0.9}, 20000, kDefaultCellBudget, true);
  const CriticalCase& c = r.cases[0];
  if (c.exceed_tau_4pi) {
    EXPECT_EQ(c.event, CriticalEvent::BoundExceeded);
    EXPECT_EQ(c.last_tau, *c.exceed_tau_4pi);
  }
}

TEST(Critical, TinyDataIsInconclusive) {
  const CriticalReport r = critical_case_study(1, {1e-3}, 200);
  EXPECT_EQ(r.cases[0].event, CriticalEvent::Inconclusive);
  EXPECT_EQ(r.cases[0].last_tau, 200);
  EXPECT_EQ(to_string(CriticalEvent::Inconclusive), "inconclusive");
}

TEST(Critical, BudgetEvent) {
  const CriticalReport r = critical_case_study(2, {1e-3}, 1000, 500);
  EXPECT_EQ(r.cases[0].event, CriticalEvent::BudgetExhausted);
}

TEST(KernelAsym, OneDimensionalTable) {
  const KernelAsymReport r = kernel_asymptotics_report(1, 400);
  ASSERT_EQ(r.rows.size(), 401u);
  EXPECT_NEAR(r.rows[10].scaled, 0.24609375 * std::sqrt(10.0), 1e-15);
  EXPECT_TRUE(std::isnan(r.rows[11].ratio_clt));
  EXPECT_TRUE(std::isnan(r.rows[0].ratio_4pi));
  // Stirling oracle for the last row.
  EXPECT_NEAR(r.rows[400].ratio_clt, 1.0 - 1.0 / (8.0 * 200), 1e-6);
  EXPECT_NEAR(r.rows[400].ratio_4pi / r.rows[400].ratio_clt, std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.max_mass_error, 1e-12);
}

TEST(KernelAsym, ThreeDimensionalUsesSymmetricStream) {
  const KernelAsymReport r = kernel_asymptotics_report(3, 60);
  EXPECT_LE(r.max_mass_error, 1e-13);
  const KernelTable t = build_kernel(3, 60);
  EXPECT_LE(oracle::rel_err(r.rows[60].u_origin, t.slice(60).at({0, 0, 0})), 1e-13);
}

TEST(NormGrowth, ZeroData) {
  const NormGrowthReport r = duhamel_norm_growth(1, 1.0, Field(1), 10);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.l1_f, 0.0);
    EXPECT_EQ(row.lower_h, 0.0);
    EXPECT_EQ(row.lower_kernel, 0.0);
  }
  EXPECT_TRUE(r.bounds_hold);
}

TEST(NormGrowth, LowerBoundsHold) {
  for (double alpha : {1.0, 2.0, 3.0}) {
    const NormGrowthReport r = duhamel_norm_growth(1, alpha, Field::from_sites(1, {{{0}, 0.3}, {{1}, 0.2}}), 300);
    EXPECT_TRUE(r.bounds_hold) << alpha;
    EXPECT_EQ(r.c, 0.3);
    ASSERT_GE(r.rows.size(), 2u);
    // g^0 is 0.15 at -1 and 1, 0.1 at 0 and 2.
    auto H = [&](double g) { return g / std::pow(1.0 - std::pow(g, alpha), 1.0 / alpha) - g; };
    EXPECT_NEAR(r.rows[1].lower_h, 2.0 * H(0.15) + 2.0 * H(0.1), 1e-15);
    EXPECT_NEAR(r.rows[1].l1_f, 0.5 + r.rows[1].lower_h, 1e-15);
  }
}

TEST(Harmonic, SlopeMatchesGaussianOracle) {
  // d = 1: sum_n (U^s_n)^3 ~ 2 / (sqrt(3) pi s).
  const HarmonicGrowthReport r = harmonic_growth_check(1, 100, 3000);
  const double want = 2.0 / (std::sqrt(3.0) * std::numbers::pi);
  EXPECT_NEAR(r.fitted_slope / want, 1.0, 0.01);
  EXPECT_NEAR(r.predicted_slope_clt, want, 1e-12);
  EXPECT_NEAR(r.predicted_slope_4pi, want, 1e-12);
  EXPECT_TRUE(r.linear_in_log);
  EXPECT_EQ(r.local_slopes.size(), 4u);
  EXPECT_THROW(harmonic_growth_check(1, 10, 5), DomainError);
}
