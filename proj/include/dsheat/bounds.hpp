#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsheat/evolution.hpp"
#include "dsheat/field.hpp"
#include "dsheat/params.hpp"

namespace dsheat {

/// Linear evolution h, the two comparison fields built from it, and the
/// true solution, all at the same step.
///
///   sub^tau   = h^tau / (1 - tau (h^tau)^a)^(1/a)      if 1 - tau (h^tau_n)^a > 0 everywhere
///   super^tau = h^tau / (1 - sum_{k<=tau} m_k^a)^(1/a)  if that sum is < 1, m_k = max h^k
///
/// Only the unscaled Standard variant is supported.
struct SandwichState {
  std::int64_t tau = 0;
  Field h;
  double m_prefix = 0.0;
  std::optional<Field> sub;
  std::optional<Field> super;
  EvolutionState f;
};

SandwichState init_sandwich(const Params& params, const Field& f0);
SandwichState advance_sandwich(const SandwichState& state);

struct SandwichReport {
  bool ok = true;
  std::string message;
  std::optional<Coord> site;
  double worst_sub_excess = 0.0;    ///< max(sub - f), where both exist
  double worst_super_excess = 0.0;  ///< max(f - super), where both exist
};

/// sub <= f <= super within `tol` where the fields exist, f Alive implies
/// sub exists, and super exists implies f Alive.
SandwichReport check_sandwich(const SandwichState& state, double tol = 1e-10);

/// sub^tau from h^tau, or nullopt when 1 - tau (h_n)^a <= 0 somewhere.
std::optional<Field> subsolution(const Field& h, double alpha, std::int64_t tau);
/// super^tau from h^tau and the prefix sum, or nullopt when m_prefix >= 1.
std::optional<Field> supersolution(const Field& h, double alpha, double m_prefix);

/// Smallest tau <= horizon at which the subsolution fails to exist, an
/// upper bound on the blow-up step of the Standard scheme.
std::optional<std::int64_t> subsolution_blowup_bound(const Field& f0, const Params& params, std::int64_t horizon,
                                                     std::size_t cell_budget = kDefaultCellBudget);

/// Largest violation of (sub'_n)^-a >= M(sub)_n^-a - 1 over sites with
/// M(sub)_n > 0 and M(sub)_n^-a - 1 > 0, relative to max(1, rhs).
/// Non-positive when the one-step inequality holds.
double subsolution_step_violation(const Field& sub, const Field& sub_next, double alpha);

/// One pass of the linear recursion h, summarizing what the sweep needs.
struct LinearSummary {
  std::optional<std::int64_t> sub_bound;       ///< first tau with tau m_tau^a >= 1
  std::optional<std::int64_t> super_lost_tau;  ///< first tau with m_prefix >= 1
  std::int64_t last_tau = 0;                   ///< last step evaluated
  double m_prefix = 0.0;                       ///< at last_tau
  /// (tau, m_tau) at logarithmically spaced steps, for tail fits.
  std::vector<std::pair<std::int64_t, double>> m_samples;
  bool budget_exhausted = false;
};

/// Runs h to `horizon`, stopping early once both events have occurred when
/// `stop_when_decided` is set.
LinearSummary linear_summary(const Field& f0, double alpha, std::int64_t horizon, bool stop_when_decided,
                             std::size_t cell_budget = kDefaultCellBudget);

}  // namespace dsheat
