#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsheat/field.hpp"
#include "dsheat/kernel.hpp"
#include "dsheat/params.hpp"

namespace dsheat {

/// A step is declared a blow-up once the average reaches 1 - kBlowupMargin
/// (or a*delta*G^a does, in the scaled form). Past that point the
/// denominator (1 - g^a)^(1/a) has no correct digits left.
inline constexpr double kBlowupMargin = 0x1p-26;

struct BlowUp {
  std::int64_t at_tau = 0;  ///< first step whose value is undefined
  Coord witness;            ///< site of the offending average
  double g_value = 0.0;     ///< the average there (|g| for the signed variant)
  bool overflow = false;    ///< a non-finite value appeared first
};

struct EvolutionState {
  Params params;
  std::int64_t tau = 0;
  Field f;
  std::optional<BlowUp> blowup;

  bool alive() const { return !blowup.has_value(); }
};

/// Validates params and the initial field (finite; non-negative unless the
/// variant is Signed) and returns the state at tau = 0.
EvolutionState initial_state(const Params& params, Field f0);

/// Sitewise map g -> g / (1 - kappa |g|^a)^(1/a) with kappa = 1, or a*delta
/// in the scaled form.
class SiteUpdate {
 public:
  explicit SiteUpdate(const Params& params);
  double operator()(double g) const;
  /// kappa * |g|^a, the quantity that must stay below 1.
  double load(double g) const;
  bool blows_up(double g) const;

 private:
  double alpha_;
  double inv_alpha_;
  double kappa_;
  bool scaled_;
  int mode_;
};

/// One step of the scheme together with the average g = M(f) it used.
struct StepOutput {
  EvolutionState next;
  Field g;
};

/// Advances an Alive Standard/Signed state by one step. Throws
/// ContractViolation for a BlownUp state or a NaiveEuler variant.
StepOutput step_with_average(const EvolutionState& state);
EvolutionState step(const EvolutionState& state);

/// Forward-Euler update 2 d lam M(f) + (1 - 2 d lam) f + delta f^(1+a).
/// Never reports blow-up; throws NumericOverflowError on non-finite values.
EvolutionState naive_step(const EvolutionState& state);

/// H(g) = g / (1 - g^a)^(1/a) - g, evaluated as g * expm1(-log1p(-g^a) / a).
/// Throws DomainError unless 0 <= g < 1.
double nonlinearity_H(double g, double alpha);

// --- spatially uniform data ------------------------------------------------

/// (a^-alpha - tau)^(-1/alpha) while the radicand is positive.
/// Throws DomainError unless 0 < a < 1 and tau >= 0.
std::optional<double> uniform_solution(double a, double alpha, std::int64_t tau);

/// Last step at which uniform data a is still defined under the blow-up
/// rule of `step`: the smallest tau with a^-alpha - tau <= (1 - m)^-alpha,
/// m = kBlowupMargin. In exact arithmetic with m -> 0 this is
/// ceil(a^-alpha) - 1, i.e. the largest tau < a^-alpha; the margin only moves
/// it when a^-alpha sits within ~alpha*m above an integer.
std::int64_t last_defined_step(double a, double alpha);

/// Uniform solution of the scaled form: (a^-alpha - alpha*tau*delta)^(-1/alpha).
std::optional<double> scaled_uniform_solution(double a, double alpha, double delta, std::int64_t tau);
/// Scaled-form analogue of last_defined_step.
std::int64_t scaled_last_defined_step(double a, double alpha, double delta);
/// Solution (a^-alpha - alpha t)^(-1/alpha) of df/dt = f^(1+alpha), f(0) = a.
std::optional<double> continuum_uniform_solution(double a, double alpha, double t);

/// A single cell that is its own neighbor in every direction, so M(v) = v.
/// Realizes spatially uniform data on the infinite lattice.
class UniformStub {
 public:
  UniformStub(const Params& params, double a);

  std::int64_t tau() const { return tau_; }
  double value() const { return value_; }
  bool alive() const { return !blowup_tau_; }
  std::optional<std::int64_t> blowup_tau() const { return blowup_tau_; }
  void step();

 private:
  Params params_;
  SiteUpdate update_;
  std::int64_t tau_ = 0;
  double value_;
  std::optional<std::int64_t> blowup_tau_;
};

/// Positive real stored as an iterated logarithm: level 0 holds x,
/// level 1 holds log x, level 2 holds log log x.
struct LevelReal {
  int level = 0;
  double value = 0.0;

  bool finite() const;
  /// log x (may be +inf when level 2 is beyond binary64).
  double log() const;
  friend bool operator<(const LevelReal& lhs, const LevelReal& rhs);
};

/// Uniform-data iteration f' = f + delta f^(1+alpha) of the forward-Euler
/// scheme, carried in LevelReal so the doubly exponential growth stays
/// representable.
class NaiveUniformIteration {
 public:
  NaiveUniformIteration(double a, double alpha, double delta);
  std::int64_t tau() const { return tau_; }
  const LevelReal& value() const { return value_; }
  void step();

 private:
  double alpha_;
  double log_delta_;
  std::int64_t tau_ = 0;
  LevelReal value_;
};

// --- runs ------------------------------------------------------------------

struct RunRow {
  std::int64_t tau = 0;
  double sup_f = 0.0;  ///< max |f^tau|
  double sup_g = 0.0;  ///< max |M(f^tau)|
  double l1_f = 0.0;
  std::size_t support_cells = 0;
};

enum class Outcome { BlewUp, SurvivedHorizon, BudgetExhausted, NumericOverflow };
std::string_view to_string(Outcome o);

struct RunOptions {
  bool capture_history = false;
  std::size_t cell_budget = kDefaultCellBudget;
  /// Called with every state reached, including the initial one.
  std::function<void(const EvolutionState&)> on_state;
};

struct RunRecord {
  Params params;
  std::int64_t horizon = 0;
  std::vector<RunRow> rows;
  Outcome outcome = Outcome::SurvivedHorizon;
  /// Blow-up step, horizon, or the last step reached before an error.
  std::int64_t outcome_tau = 0;
  std::optional<BlowUp> blowup;
  Field final_f;
  /// g^0 .. g^{tau-1}, filled when capture_history is set.
  std::vector<Field> g_history;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
};

/// Steps until blow-up or tau = horizon and records one row per reached
/// state. Budget exhaustion and numeric overflow end the run with their own
/// outcomes rather than throwing.
RunRecord run(const Params& params, const Field& initial, std::int64_t horizon, const RunOptions& options = {});

/// h^tau + sum_{s=1}^{tau} U^{tau-s} * H(g^{s-1}) for the Standard variant.
/// Throws DomainError when the history or kernel is too short.
Field duhamel_reconstruct(const KernelTable& kernel, const Field& initial, std::span<const Field> g_history,
                          std::int64_t tau, double alpha);

}  // namespace dsheat
