#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dsheat/errors.hpp"
#include "dsheat/kernel.hpp"
#include "oracles.hpp"

using namespace dsheat;

TEST(Kernel, FirstSlices) {
  const KernelTable t1 = build_kernel(1, 3);
  EXPECT_EQ(t1.slice(0), Field::point({0}, 1.0));
  const Field& u2 = t1.slice(2);
  EXPECT_EQ(u2.at({-2}), 0.25);
  EXPECT_EQ(u2.at({0}), 0.5);
  EXPECT_EQ(u2.at({2}), 0.25);
  EXPECT_EQ(u2.support_size(), 3u);

  const KernelTable t2 = build_kernel(2, 1);
  for (Coord n : {Coord{1, 0}, Coord{-1, 0}, Coord{0, 1}, Coord{0, -1}}) EXPECT_EQ(t2.slice(1).at(n), 0.25);
  EXPECT_THROW(t1.slice(4), DomainError);
}

TEST(Kernel, BinomialOracle1d) {
  const KernelTable t = build_kernel(1, 60);
  for (int tau = 0; tau <= 60; ++tau) {
    const Field& u = t.slice(tau);
    for (std::int64_t n = -tau - 1; n <= tau + 1; ++n) {
      const double want = oracle::walk1(tau, n);
      if (want == 0.0)
        EXPECT_EQ(u.at({n}), 0.0) << tau << " " << n;
      else
        EXPECT_LE(oracle::rel_err(u.at({n}), want), 1e-12) << tau << " " << n;
    }
  }
}

TEST(Kernel, OriginAtTen) {
  const KernelTable t = build_kernel(1, 10);
  EXPECT_EQ(t.slice(10).at({0}), 252.0 / 1024.0);
  EXPECT_NEAR(t.slice(10).at({0}) * std::sqrt(10.0), 0.7782, 5e-5);
}

TEST(Kernel, DiagonalProductOracle2d) {
  const KernelTable t = build_kernel(2, 40);
  for (int tau : {1, 2, 7, 20, 40}) {
    const Field& u = t.slice(tau);
    for (std::int64_t x = -tau; x <= tau; ++x) {
      for (std::int64_t y = -tau; y <= tau; ++y) {
        const double want = oracle::walk2(tau, x, y);
        if (want == 0.0)
          EXPECT_EQ(u.at({x, y}), 0.0);
        else
          EXPECT_LE(oracle::rel_err(u.at({x, y}), want), 1e-12) << tau << " " << x << " " << y;
      }
    }
  }
}

TEST(Kernel, ScatterOracle3d) {
  const KernelTable t = build_kernel(3, 8);
  oracle::Sparse s{{{0, 0, 0}, 1.0}};
  for (int tau = 1; tau <= 8; ++tau) {
    s = oracle::neighbor_average(s, 3);
    const auto got = oracle::to_sparse(t.slice(tau));
    ASSERT_EQ(got.size(), s.size());
    for (const auto& [n, x] : s) EXPECT_LE(oracle::rel_err(got.at(n), x), 1e-14);
  }
}

TEST(Kernel, MassAndParity) {
  for (int d = 1; d <= 3; ++d) {
    const KernelTable t = build_kernel(d, d == 3 ? 20 : 60);
    for (std::int64_t tau = 0; tau <= t.max_tau; ++tau) {
      const Field& u = t.slice(tau);
      EXPECT_NEAR(l1_norm(u), 1.0, 1e-12);
      u.for_each([&](std::span<const std::int64_t> n, double x) {
        std::int64_t s = tau;
        for (auto c : n) s += c;
        if (s & 1) {
          EXPECT_EQ(x, 0.0);
        }
        EXPECT_GE(x, 0.0);
      });
    }
  }
}

TEST(Kernel, BudgetIsEnforced) {
  EXPECT_THROW(build_kernel(2, 100, 1000), ResourceLimitError);
  KernelStream s(2, 50);
  EXPECT_THROW(
      {
        for (int i = 0; i < 10; ++i) s.advance();
      },
      ResourceLimitError);
  EXPECT_THROW(SymmetricKernelStream3(200, 1000), ResourceLimitError);
}

TEST(Green, ShiftedKernel) {
  const KernelTable t = build_kernel(1, 4);
  EXPECT_TRUE(green(t, 0).is_zero());
  EXPECT_EQ(green(t, 1), Field::point({0}, 1.0));
  EXPECT_EQ(green(t, 3), t.slice(2));
  EXPECT_EQ(green(t, 5), t.slice(4));
  EXPECT_THROW(green(t, 6), DomainError);
  EXPECT_THROW(green(t, -1), DomainError);
}

TEST(Convolve, TwoPointExample) {
  const KernelTable t = build_kernel(1, 2);
  const Field data = Field::from_sites(1, {{{0}, 1.0}, {{1}, 1.0}});
  const Field c = convolve(t.slice(2), data);
  const std::vector<std::pair<std::int64_t, double>> want{{-2, 0.25}, {-1, 0.25}, {0, 0.5},
                                                          {1, 0.5},   {2, 0.25},  {3, 0.25}};
  for (const auto& [n, x] : want) EXPECT_EQ(c.at({n}), x);
  EXPECT_EQ(c.support_size(), 6u);
}

TEST(Convolve, MatchesDoubleSum) {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 3; ++d) {
    const Field a = oracle::random_field(rng, d, 4, 1.0);
    const Field b = oracle::random_field(rng, d, 4, 1.0);
    oracle::Sparse want;
    for (const auto& [n, x] : oracle::to_sparse(a))
      for (const auto& [m, y] : oracle::to_sparse(b)) {
        auto s = n;
        for (std::size_t k = 0; k < s.size(); ++k) s[k] += m[k];
        want[s] += x * y;
      }
    const auto got = oracle::to_sparse(convolve(a, b));
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [n, x] : want) EXPECT_LE(oracle::rel_err(got.at(n), x), 1e-13);
  }
}

TEST(Convolve, UnitMassIsPreserved) {
  const KernelTable t = build_kernel(2, 12);
  const Field data = Field::from_sites(2, {{{0, 0}, 0.3}, {{2, -1}, 0.7}});
  EXPECT_NEAR(l1_norm(convolve(t.slice(12), data)), 1.0, 1e-14);
}

TEST(Asymptotics, Constants) {
  EXPECT_NEAR(origin_constant_4pi(1), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(origin_constant_clt(1), 0.7978845608028654, 1e-15);
  for (int d = 1; d <= 3; ++d)
    EXPECT_NEAR(origin_constant_clt(d) / origin_constant_4pi(d), std::pow(2.0, d / 2.0), 1e-14);
}

TEST(Asymptotics, RatioDomain) {
  const KernelTable t = build_kernel(1, 10);
  EXPECT_THROW(asymptotic_ratio(t, 3, 1.0), DomainError);
  EXPECT_THROW(asymptotic_ratio(t, 0, 1.0), DomainError);
  EXPECT_NEAR(asymptotic_ratio(t, 10, origin_constant_clt(1)), 252.0 / 1024.0 * std::sqrt(10.0) / 0.7978845608028654,
              1e-14);
}

TEST(Asymptotics, CltRatioApproachesOne) {
  // Stirling: binom(2k, k) / 4^k = (pi k)^{-1/2} (1 - 1/(8k) + ...).
  KernelStream s(1);
  while (s.tau() < 2000) s.advance();
  const double r = asymptotic_ratio(s.origin(), 1, 2000, origin_constant_clt(1));
  EXPECT_NEAR(r, 1.0 - 1.0 / (8.0 * 1000), 1e-7);
}

TEST(KernelStream, MatchesTable) {
  for (int d = 1; d <= 3; ++d) {
    const KernelTable t = build_kernel(d, 12);
    KernelStream s(d);
    for (int tau = 1; tau <= 12; ++tau) {
      s.advance();
      EXPECT_EQ(s.current(), t.slice(tau));
      EXPECT_NEAR(s.mass(), 1.0, 1e-14);
    }
  }
}

TEST(SymmetricKernelStream3, MatchesDenseKernel) {
  const KernelTable t = build_kernel(3, 30);
  SymmetricKernelStream3 s(30);
  EXPECT_EQ(s.origin(), 1.0);
  for (int tau = 1; tau <= 30; ++tau) {
    s.advance();
    const Field& u = t.slice(tau);
    double worst = 0.0;
    for (std::int64_t x = -tau - 1; x <= tau + 1; ++x)
      for (std::int64_t y = -tau - 1; y <= tau + 1; ++y)
        for (std::int64_t z = -tau - 1; z <= tau + 1; ++z) {
          const double want = u.at({x, y, z});
          const double got = s.at(x, y, z);
          if (want == 0.0)
            ASSERT_EQ(got, 0.0);
          else
            worst = std::max(worst, oracle::rel_err(got, want));
        }
    EXPECT_LE(worst, 1e-13) << "tau " << tau;
    EXPECT_NEAR(s.mass(), 1.0, 1e-14);
    EXPECT_NEAR(s.recompute_mass(), s.mass(), 1e-15);
    EXPECT_TRUE(s.parity_zeros_exact());
  }
  EXPECT_THROW(s.advance(), DomainError);
}
