#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dsheat/field.hpp"
#include "dsheat/params.hpp"

namespace dsheat {

/// Transition probabilities U^tau of the d-dimensional simple random walk,
/// U^0 = delta_0 and U^{tau+1} = neighbor_average(U^tau), for every
/// tau in [0, max_tau].
struct KernelTable {
  int d = 1;
  std::int64_t max_tau = 0;
  std::vector<Field> slices;

  const Field& slice(std::int64_t tau) const;
};

/// Builds every slice by recursion. Throws ResourceLimitError when the total
/// number of stored cells would exceed `cell_budget`.
KernelTable build_kernel(int d, std::int64_t max_tau, std::size_t cell_budget = kDefaultCellBudget);

/// Time-shifted kernel: the zero field for tau = 0, U^{tau-1} otherwise.
/// Valid for tau <= max_tau + 1; throws DomainError beyond.
Field green(const KernelTable& table, std::int64_t tau);

/// Exact discrete convolution sum_m kernel[n - m] * data[m].
Field convolve(const Field& kernel_slice, const Field& data, std::size_t cell_budget = kDefaultCellBudget);

/// 2 (d / 4 pi)^{d/2}: the origin constant quoted with the decay estimate.
double origin_constant_4pi(int d);
/// 2 (d / 2 pi)^{d/2}: the origin constant given by the local central limit
/// theorem for the simple random walk (factor 2 from the parity lattice).
double origin_constant_clt(int d);

/// U^tau_0 / (constant * tau^{-d/2}). Requires tau >= 2 and even; throws
/// DomainError otherwise.
double asymptotic_ratio(const KernelTable& table, std::int64_t tau, double constant);
double asymptotic_ratio(double u_origin, int d, std::int64_t tau, double constant);

/// Two-slice recursion for long horizons where only the current slice is
/// needed (normalization and asymptotic checks).
class KernelStream {
 public:
  explicit KernelStream(int d, std::size_t cell_budget = kDefaultCellBudget);

  std::int64_t tau() const { return tau_; }
  const Field& current() const { return current_; }
  double origin() const;
  double mass() const { return l1_norm(current_); }
  void advance();

 private:
  std::int64_t tau_ = 0;
  Field current_;
  std::vector<double> spare_;
  std::size_t budget_;
};

/// Three-dimensional kernel stored on the fundamental domain
/// 0 <= a <= b <= c, a + b + c <= max_tau of the hyperoctahedral symmetry
/// group. Memory and work are ~1/48 of the dense recursion, which makes
/// slices with tau ~ 10^3 affordable.
class SymmetricKernelStream3 {
 public:
  explicit SymmetricKernelStream3(std::int64_t max_tau, std::size_t cell_budget = kDefaultCellBudget);

  std::int64_t tau() const { return tau_; }
  std::int64_t max_tau() const { return max_tau_; }
  void advance();

  /// U^tau at an arbitrary lattice point.
  double at(std::int64_t x, std::int64_t y, std::int64_t z) const;
  double origin() const { return at(0, 0, 0); }
  /// Sum over Z^3, each stored cell weighted by the size of its orbit.
  /// Accumulated during advance(); recompute_mass() rescans the slice.
  double mass() const { return mass_; }
  double recompute_mass() const;
  /// True when every stored cell with a + b + c + tau odd is exactly zero.
  bool parity_zeros_exact() const;
  /// Number of stored cells per slice.
  std::size_t cells_per_slice() const { return cur_.size(); }

 private:
  std::size_t index(std::int64_t a, std::int64_t b, std::int64_t c) const {
    return row_start_[static_cast<std::size_t>(c * width_ + b)] + static_cast<std::size_t>(a);
  }
  double prev_at(std::int64_t x, std::int64_t y, std::int64_t z) const;

  std::int64_t max_tau_;
  std::int64_t layout_;  // largest coordinate sum representable
  std::int64_t width_;
  std::int64_t tau_ = 0;
  double mass_ = 1.0;
  std::vector<std::size_t> row_start_;
  std::vector<double> cur_;
  std::vector<double> prev_;
};

}  // namespace dsheat
