#pragma once

// Reference implementations that share no code with the library. They are
// slow and only meant for small inputs.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "dsheat/field.hpp"

namespace oracle {

using Sparse = std::map<std::vector<std::int64_t>, double>;

inline Sparse to_sparse(const dsheat::Field& f) {
  Sparse s;
  f.for_each([&](std::span<const std::int64_t> n, double x) {
    if (x != 0.0) s[std::vector<std::int64_t>(n.begin(), n.end())] = x;
  });
  return s;
}

// (1/2d) sum over the 2d neighbors, accumulated by scattering each value.
inline Sparse neighbor_average(const Sparse& v, int d) {
  Sparse out;
  for (const auto& [n, x] : v) {
    for (int k = 0; k < d; ++k) {
      for (int s : {-1, 1}) {
        auto m = n;
        m[static_cast<std::size_t>(k)] += s;
        out[m] += x / (2.0 * d);
      }
    }
  }
  return out;
}

// binom(n, k) exactly for n <= 62.
inline std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j) - 1] + row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

// One-dimensional walk: binom(tau, (tau + n)/2) / 2^tau.
inline double walk1(int tau, std::int64_t n) {
  if (n < -tau || n > tau || ((tau + n) & 1) != 0) return 0.0;
  return std::ldexp(static_cast<double>(binom(tau, static_cast<int>((tau + n) / 2))), -tau);
}

// The planar walk factorizes along the diagonals: U(x, y) = P(x + y) P(x - y).
inline double walk2(int tau, std::int64_t x, std::int64_t y) {
  return walk1(tau, x + y) * walk1(tau, x - y);
}

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Random field on a small box with values in [0, hi); some cells zeroed.
inline dsheat::Field random_field(std::mt19937_64& rng, int d, std::int64_t max_extent, double hi) {
  std::uniform_int_distribution<std::int64_t> ext(1, max_extent);
  std::uniform_int_distribution<std::int64_t> off(-3, 3);
  std::uniform_real_distribution<double> val(0.0, hi);
  std::bernoulli_distribution zero(0.25);
  dsheat::Box box{dsheat::Coord(static_cast<std::size_t>(d)), dsheat::Coord(static_cast<std::size_t>(d))};
  for (int k = 0; k < d; ++k) {
    box.lo[static_cast<std::size_t>(k)] = off(rng);
    box.extents[static_cast<std::size_t>(k)] = ext(rng);
  }
  std::vector<double> v(box.cell_count());
  for (auto& x : v) x = zero(rng) ? 0.0 : val(rng);
  return dsheat::Field(box, std::move(v));
}

}  // namespace oracle
