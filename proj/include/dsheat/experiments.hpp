#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsheat/evolution.hpp"
#include "dsheat/field.hpp"

namespace dsheat {

enum class InitShape { PointMass, Box };

/// Point mass eps at the origin, or a centered box of `width` cells per
/// axis each holding eps.
Field initial_field(int d, InitShape shape, double eps, std::int64_t width = 1);

struct SweepSpec {
  int d = 1;
  std::vector<double> alphas;
  std::vector<double> epsilons;
  std::int64_t horizon = 1;
  InitShape init_shape = InitShape::PointMass;
  std::int64_t box_width = 1;
  std::size_t cell_budget = kDefaultCellBudget;
  unsigned threads = 1;

  void validate() const;
};

/// How strongly a cell's supersolution supports global existence.
enum class SuperCertificate {
  None,                ///< m_prefix reached 1 within the horizon
  ProvedAtHorizon,     ///< m_prefix < 1 at every recorded step
  ExtrapolatedGlobal,  ///< additionally m_prefix + fitted tail < 1
};
std::string_view to_string(SuperCertificate c);

struct SweepCell {
  double alpha = 0.0;
  double epsilon = 0.0;
  Outcome outcome = Outcome::SurvivedHorizon;
  std::int64_t outcome_tau = 0;
  std::optional<std::int64_t> blowup_tau;
  double final_l1 = 0.0;
  double peak_sup_g = 0.0;
  std::optional<std::int64_t> sub_bound_tau;
  SuperCertificate super_certificate = SuperCertificate::None;
  double m_prefix = 0.0;       ///< at the last step of the linear pass
  double m_tail_estimate = 0.0;  ///< fitted tail beyond that step (inf when divergent)
  std::string error;           ///< set when the cell could not be computed
};

struct PhaseBoundary {
  double epsilon = 0.0;
  std::optional<double> largest_alpha_blown_up;
  std::optional<double> smallest_alpha_survived;
};

struct SweepResult {
  SweepSpec spec;
  /// Row-major over (alpha, epsilon) in the order given by the spec.
  std::vector<SweepCell> cells;
  /// Per alpha: blow-up step nonincreasing in epsilon (survivors count as
  /// +inf) and never a survivor at a larger epsilon than a blow-up.
  std::vector<std::pair<double, bool>> monotone_in_epsilon;
  std::vector<PhaseBoundary> boundaries;

  const SweepCell& at(std::size_t alpha_index, std::size_t eps_index) const;
};

SweepResult fujita_sweep(const SweepSpec& spec);

/// Fits m_tau ~ C tau^-p to the samples with tau >= horizon/10 and returns
/// sum_{k > last} (C k^-p)^alpha bounded by the integral, or +inf when
/// p alpha <= 1 or too few samples are available.
double power_tail_estimate(const std::vector<std::pair<std::int64_t, double>>& samples, double alpha,
                           std::int64_t last_tau);

// --- critical exponent alpha = 2/d -------------------------------------------

/// (1/2)(4 pi / d)^{d/2}: the l1 bound a global critical solution obeys.
double critical_l1_bound_4pi(int d);
/// Same bound with the local-CLT origin constant: (1/2)(2 pi / d)^{d/2}.
double critical_l1_bound_clt(int d);

enum class CriticalEvent { BlewUp, BoundExceeded, Inconclusive, BudgetExhausted };
std::string_view to_string(CriticalEvent e);

struct CriticalCase {
  double epsilon = 0.0;
  CriticalEvent event = CriticalEvent::Inconclusive;
  std::optional<std::int64_t> blowup_tau;
  std::optional<std::int64_t> exceed_tau_4pi;
  std::optional<std::int64_t> exceed_tau_clt;
  std::int64_t last_tau = 0;
  double max_l1 = 0.0;
  /// (tau, l1, sup f) at logarithmically spaced steps plus the last one.
  struct Sample {
    std::int64_t tau;
    double l1;
    double sup_f;
  };
  std::vector<Sample> trajectory;
};

struct CriticalReport {
  int d = 1;
  double alpha = 2.0;
  std::int64_t horizon = 0;
  double bound_4pi = 0.0;
  double bound_clt = 0.0;
  std::vector<CriticalCase> cases;
};

/// Runs point-mass data eps at alpha = 2/d. With `stop_at_exceedance`, a
/// run ends at the first step whose l1 norm passes the 4pi-constant bound.
CriticalReport critical_case_study(int d, const std::vector<double>& epsilons, std::int64_t horizon,
                                   std::size_t cell_budget = kDefaultCellBudget, bool stop_at_exceedance = false);

// --- kernel asymptotics ---------------------------------------------------------

struct KernelAsymRow {
  std::int64_t tau = 0;
  double u_origin = 0.0;
  double l1_sum = 0.0;
  double scaled = 0.0;  ///< u_origin * tau^{d/2}
  double ratio_4pi = 0.0;
  double ratio_clt = 0.0;
};

struct KernelAsymReport {
  int d = 1;
  std::int64_t max_tau = 0;
  double constant_4pi = 0.0;
  double constant_clt = 0.0;
  /// Every step; ratio columns are NaN for odd tau and tau = 0.
  std::vector<KernelAsymRow> rows;
  /// Relative change of `scaled` between the last two even steps.
  double tail_change = 0.0;
  bool converged = false;  ///< tail_change < 1%
  double max_mass_error = 0.0;
};

/// Streams U^tau up to max_tau (dense for d <= 2, symmetry-reduced for
/// d = 3). Throws ResourceLimitError when the stream exceeds the budget.
KernelAsymReport kernel_asymptotics_report(int d, std::int64_t max_tau,
                                           std::size_t cell_budget = kDefaultCellBudget);

// --- Duhamel lower bounds ---------------------------------------------------------

struct NormGrowthRow {
  std::int64_t tau = 0;
  double l1_f = 0.0;
  double lower_h = 0.0;       ///< sum_{s<=tau} sum_n H(g^{s-1})
  double lower_kernel = 0.0;  ///< (c^{1+a}/a) sum_{s<=tau} sum_n (U^s_n)^{1+a}
};

struct NormGrowthReport {
  double c = 0.0;  ///< largest initial point value
  std::vector<NormGrowthRow> rows;
  bool blew_up = false;
  bool bounds_hold = true;  ///< both lower bounds <= l1 within 1e-9 relative
  std::optional<std::int64_t> first_violation;
};

/// Runs the Standard scheme from f0 with both lower-bound partial sums
/// tracked in lockstep, until blow-up or the horizon.
NormGrowthReport duhamel_norm_growth(int d, double alpha, const Field& f0, std::int64_t horizon,
                                     std::size_t cell_budget = kDefaultCellBudget);

struct HarmonicGrowthReport {
  int d = 1;
  std::int64_t s_lo = 0;
  std::int64_t s_hi = 0;
  /// Least-squares slope of S(tau) = sum_{s<=tau} sum_n (U^s_n)^{1+2/d} on log tau.
  double fitted_slope = 0.0;
  /// Slopes over consecutive sub-intervals of [s_lo, s_hi].
  std::vector<double> local_slopes;
  double max_relative_deviation = 0.0;
  bool linear_in_log = false;  ///< every local slope within the tolerance
  double predicted_slope_4pi = 0.0;
  double predicted_slope_clt = 0.0;
  std::vector<std::pair<std::int64_t, double>> samples;  ///< (tau, S(tau))
};

/// Measures whether S(tau) grows like a multiple of log tau on [s_lo, s_hi].
HarmonicGrowthReport harmonic_growth_check(int d, std::int64_t s_lo, std::int64_t s_hi, double tolerance = 0.15,
                                           std::size_t cell_budget = kDefaultCellBudget);

}  // namespace dsheat
