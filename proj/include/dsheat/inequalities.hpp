#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dsheat {

/// N^a sum x_k^(1+a) - (sum x_k)^(1+a); non-negative for x_k >= 0.
/// Throws DomainError when xs is empty, has a negative entry, or sums to 0.
double phi(std::span<const double> xs, double alpha);

struct HBoundCheck {
  double h = 0.0;    ///< H(g)
  double rhs = 0.0;  ///< g^(1+a) / a
  bool ok = false;   ///< h >= rhs - 1e-12
};

/// Compares H(g) with g^(1+a)/a. Throws DomainError unless 0 <= g < 1.
HBoundCheck h_lower_bound_check(double g, double alpha);

/// True when x/(1-x^a)^(1/a) <= y/(1-y^a)^(1/a) within 1e-12 relative.
/// Throws DomainError unless 0 <= x <= y < 1.
bool update_monotone_check(double x, double y, double alpha);

struct SuiteResult {
  std::string name;
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  /// Smallest normalized margin seen; negative beyond tolerance means a violation.
  double worst_margin = 0.0;
  /// Human-readable description of the worst sample.
  std::string worst_case;
};

/// Random phi samples with N <= 6, alpha in (0,4], xs in [0,10]^N. Also
/// checks phi(x,...,x) = 0 and invariance under permutation.
SuiteResult phi_suite(std::uint64_t seed, std::int64_t samples = 10000);
/// Random (g, alpha) with g in [0,1), alpha in (0,4].
SuiteResult h_bound_suite(std::uint64_t seed, std::int64_t samples = 10000);
/// Random ordered pairs 0 <= x <= y < 1 with alpha in (0,4].
SuiteResult monotone_suite(std::uint64_t seed, std::int64_t samples = 10000);

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, std::int64_t samples = 10000);

}  // namespace dsheat
