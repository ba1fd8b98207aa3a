#include "dsheat/evolution.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "dsheat/errors.hpp"

namespace dsheat {

namespace {

enum Mode { kGeneric, kAlphaOne, kAlphaTwo, kAlphaThree, kAlphaHalf };

double power(double x, double alpha, int mode) {
  switch (mode) {
    case kAlphaOne:
      return x;
    case kAlphaTwo:
      return x * x;
    case kAlphaThree:
      return x * x * x;
    case kAlphaHalf:
      return std::sqrt(x);
    default:
      return std::pow(x, alpha);
  }
}

}  // namespace

SiteUpdate::SiteUpdate(const Params& params)
    : alpha_(params.alpha),
      inv_alpha_(1.0 / params.alpha),
      kappa_(params.scaled() ? params.alpha * *params.delta : 1.0),
      scaled_(params.scaled()),
      mode_(kGeneric) {
  if (alpha_ == 1.0) mode_ = kAlphaOne;
  if (alpha_ == 2.0) mode_ = kAlphaTwo;
  if (alpha_ == 3.0) mode_ = kAlphaThree;
  if (alpha_ == 0.5) mode_ = kAlphaHalf;
}

double SiteUpdate::load(double g) const {
  return kappa_ * power(std::abs(g), alpha_, mode_);
}

bool SiteUpdate::blows_up(double g) const {
  if (scaled_) return load(g) >= 1.0 - kBlowupMargin;
  return std::abs(g) >= 1.0 - kBlowupMargin;
}

double SiteUpdate::operator()(double g) const {
  if (g == 0.0) return 0.0;
  const double s = 1.0 - load(g);
  switch (mode_) {
    case kAlphaOne:
      return g / s;
    case kAlphaTwo:
      return g / std::sqrt(s);
    case kAlphaThree:
      return g / std::cbrt(s);
    case kAlphaHalf:
      return g / (s * s);
    default:
      return g * std::pow(s, -inv_alpha_);
  }
}

// ---------------------------------------------------------------------------

EvolutionState initial_state(const Params& params, Field f0) {
  params.validate();
  if (f0.dim() != params.d) throw DomainError("initial field dimension does not match d");
  if (params.variant != Variant::Signed && !f0.all_nonnegative())
    throw DomainError("initial field must be non-negative for the " + std::string(to_string(params.variant)) +
                      " variant");
  return EvolutionState{params, 0, std::move(f0), std::nullopt};
}

StepOutput step_with_average(const EvolutionState& state) {
  if (!state.alive()) throw ContractViolation("step: state has already blown up");
  if (state.params.variant == Variant::NaiveEuler) throw ContractViolation("step: use naive_step for NaiveEuler");

  const SiteUpdate update(state.params);
  Field g = neighbor_average(state.f);
  const auto gv = g.values();

  std::size_t worst = 0;
  double worst_abs = 0.0;
  bool nonfinite = false;
  for (std::size_t i = 0; i < gv.size(); ++i) {
    const double a = std::abs(gv[i]);
    if (!std::isfinite(a)) {
      nonfinite = true;
      worst = i;
      worst_abs = a;
      break;
    }
    if (a > worst_abs) {
      worst_abs = a;
      worst = i;
    }
  }

  EvolutionState next{state.params, state.tau + 1, state.f, std::nullopt};
  if (nonfinite || update.blows_up(worst_abs)) {
    next.blowup = BlowUp{state.tau + 1, g.box().coord_of(worst), worst_abs, nonfinite};
    return {std::move(next), std::move(g)};
  }

  std::vector<double> out(gv.size());
  for (std::size_t i = 0; i < gv.size(); ++i) {
    const double v = update(gv[i]);
    if (!std::isfinite(v)) {
      next.blowup = BlowUp{state.tau + 1, g.box().coord_of(i), std::abs(gv[i]), true};
      return {std::move(next), std::move(g)};
    }
    out[i] = v;
  }
  next.f = Field(g.box(), std::move(out));
  return {std::move(next), std::move(g)};
}

EvolutionState step(const EvolutionState& state) {
  return step_with_average(state).next;
}

EvolutionState naive_step(const EvolutionState& state) {
  if (!state.alive()) throw ContractViolation("naive_step: state has already blown up");
  const Params& p = state.params;
  if (p.variant != Variant::NaiveEuler) throw ContractViolation("naive_step: requires the NaiveEuler variant");
  const double diffusion = 2.0 * p.d * p.naive_lambda;
  const double dt = p.delta.value_or(0.0);

  const Field avg = neighbor_average(state.f);
  const Box box = union_box(avg.box(), state.f.box());
  const auto strides = box.strides();
  std::vector<double> out(box.cell_count(), 0.0);
  auto offset = [&](std::span<const std::int64_t> n) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n.size(); ++k) idx += static_cast<std::size_t>(n[k] - box.lo[k]) * strides[k];
    return idx;
  };
  avg.for_each([&](std::span<const std::int64_t> n, double m) {
    if (m != 0.0) out[offset(n)] += diffusion * m;
  });
  state.f.for_each([&](std::span<const std::int64_t> n, double v) {
    if (v != 0.0) out[offset(n)] += (1.0 - diffusion) * v + dt * v * std::pow(std::abs(v), p.alpha);
  });
  for (double v : out) {
    if (!std::isfinite(v))
      throw NumericOverflowError("naive_step: value left the binary64 range at tau " + std::to_string(state.tau + 1));
  }
  return EvolutionState{p, state.tau + 1, Field(box, std::move(out)), std::nullopt};
}

double nonlinearity_H(double g, double alpha) {
  if (!(g >= 0.0) || !(g < 1.0)) throw DomainError("nonlinearity_H: g must lie in [0, 1)");
  if (!(alpha > 0.0)) throw DomainError("nonlinearity_H: alpha must be positive");
  if (g == 0.0) return 0.0;
  return g * std::expm1(-std::log1p(-std::pow(g, alpha)) / alpha);
}

// ---------------------------------------------------------------------------

std::optional<double> uniform_solution(double a, double alpha, std::int64_t tau) {
  if (!(a > 0.0) || !(a < 1.0)) throw DomainError("uniform_solution: a must lie in (0, 1)");
  if (!(alpha > 0.0)) throw DomainError("uniform_solution: alpha must be positive");
  if (tau < 0) throw DomainError("uniform_solution: tau must be >= 0");
  const double radicand = std::pow(a, -alpha) - static_cast<double>(tau);
  if (!(radicand > 0.0)) return std::nullopt;
  return std::pow(radicand, -1.0 / alpha);
}

std::int64_t last_defined_step(double a, double alpha) {
  if (!(a > 0.0) || !(a < 1.0)) throw DomainError("last_defined_step: a must lie in (0, 1)");
  if (!(alpha > 0.0)) throw DomainError("last_defined_step: alpha must be positive");
  const double threshold = std::pow(1.0 - kBlowupMargin, -alpha);
  const double t = std::ceil(std::pow(a, -alpha) - threshold);
  return t > 0.0 ? static_cast<std::int64_t>(t) : 0;
}

std::optional<double> scaled_uniform_solution(double a, double alpha, double delta, std::int64_t tau) {
  if (!(a > 0.0)) throw DomainError("scaled_uniform_solution: a must be positive");
  if (!(alpha > 0.0) || !(delta > 0.0)) throw DomainError("scaled_uniform_solution: alpha and delta must be positive");
  if (tau < 0) throw DomainError("scaled_uniform_solution: tau must be >= 0");
  const double radicand = std::pow(a, -alpha) - alpha * static_cast<double>(tau) * delta;
  if (!(radicand > 0.0)) return std::nullopt;
  return std::pow(radicand, -1.0 / alpha);
}

std::int64_t scaled_last_defined_step(double a, double alpha, double delta) {
  if (!(a > 0.0)) throw DomainError("scaled_last_defined_step: a must be positive");
  if (!(alpha > 0.0) || !(delta > 0.0)) throw DomainError("scaled_last_defined_step: alpha and delta must be positive");
  const double kappa = alpha * delta;
  const double t = std::ceil((std::pow(a, -alpha) - kappa / (1.0 - kBlowupMargin)) / kappa);
  return t > 0.0 ? static_cast<std::int64_t>(t) : 0;
}

std::optional<double> continuum_uniform_solution(double a, double alpha, double t) {
  if (!(a > 0.0) || !(alpha > 0.0) || !(t >= 0.0))
    throw DomainError("continuum_uniform_solution: need a > 0, alpha > 0, t >= 0");
  const double radicand = std::pow(a, -alpha) - alpha * t;
  if (!(radicand > 0.0)) return std::nullopt;
  return std::pow(radicand, -1.0 / alpha);
}

UniformStub::UniformStub(const Params& params, double a) : params_(params), update_(params), value_(a) {
  params_.validate();
  if (!std::isfinite(a)) throw DomainError("UniformStub: value must be finite");
  if (params_.variant != Variant::Signed && a < 0.0) throw DomainError("UniformStub: value must be non-negative");
}

void UniformStub::step() {
  if (blowup_tau_) throw ContractViolation("UniformStub: already blown up");
  if (params_.variant == Variant::NaiveEuler) {
    const double next = value_ + params_.delta.value_or(0.0) * value_ * std::pow(std::abs(value_), params_.alpha);
    if (!std::isfinite(next)) throw NumericOverflowError("UniformStub: value left the binary64 range");
    value_ = next;
    ++tau_;
    return;
  }
  // M(v) = v on the stub, so the average is the value itself.
  const double g = value_;
  if (update_.blows_up(g)) {
    blowup_tau_ = tau_ + 1;
    return;
  }
  const double next = update_(g);
  if (!std::isfinite(next)) {
    blowup_tau_ = tau_ + 1;
    return;
  }
  value_ = next;
  ++tau_;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kPromote = 1e100;

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

bool LevelReal::finite() const {
  return std::isfinite(value);
}

double LevelReal::log() const {
  switch (level) {
    case 0:
      return std::log(value);
    case 1:
      return value;
    default:
      return std::exp(value);
  }
}

bool operator<(const LevelReal& lhs, const LevelReal& rhs) {
  if (lhs.level != rhs.level) return lhs.level < rhs.level;
  return lhs.value < rhs.value;
}

NaiveUniformIteration::NaiveUniformIteration(double a, double alpha, double delta)
    : alpha_(alpha), log_delta_(std::log(delta)), value_{0, a} {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("NaiveUniformIteration: a must be a finite positive real");
  if (!(alpha > 0.0)) throw DomainError("NaiveUniformIteration: alpha must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("NaiveUniformIteration: delta must be >= 0");
}

void NaiveUniformIteration::step() {
  ++tau_;
  if (std::isinf(log_delta_)) return;  // delta = 0: f is constant

  if (value_.level == 0) {
    const double x = value_.value;
    const double next = x + std::exp(log_delta_) * x * std::pow(x, alpha_);
    if (std::isfinite(next) && next <= kPromote) {
      value_.value = next;
      return;
    }
    value_ = LevelReal{1, std::log(x)};
  } else if (value_.level == 1 && value_.value <= kPromote) {
    const double l = value_.value;
    const double next = l + softplus(alpha_ * l + log_delta_);
    if (next <= kPromote) {
      value_.value = next;
      return;
    }
    value_ = LevelReal{2, std::log(l)};
  } else if (value_.level == 1) {
    value_ = LevelReal{2, std::log(value_.value)};
  }

  if (value_.level == 1) {
    // Promoted from level 0 above: redo the step one level up.
    const double l = value_.value;
    value_.value = l + softplus(alpha_ * l + log_delta_);
    return;
  }
  // log f = e^m is astronomically large; f' = f (1 + delta f^alpha) gives
  // log f' = (1 + alpha) log f + log delta to all representable digits.
  const double m = value_.value;
  value_.value = m + std::log1p(alpha_ + log_delta_ * std::exp(-m));
}

// ---------------------------------------------------------------------------

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::BlewUp:
      return "blew_up";
    case Outcome::SurvivedHorizon:
      return "survived_horizon";
    case Outcome::BudgetExhausted:
      return "budget_exhausted";
    case Outcome::NumericOverflow:
      return "numeric_overflow";
  }
  return "unknown";
}

namespace {

std::size_t grown_cells(const Field& f) {
  std::size_t n = 1;
  for (auto e : f.box().extents) n *= static_cast<std::size_t>(e + 2);
  return n;
}

RunRow make_row(const EvolutionState& s, double sup_g) {
  return RunRow{s.tau, max_abs(s.f), sup_g, l1_norm(s.f), s.f.support_size()};
}

}  // namespace

RunRecord run(const Params& params, const Field& initial, std::int64_t horizon, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (horizon < 0) throw DomainError("run: horizon must be >= 0");

  RunRecord rec;
  rec.params = params;
  rec.horizon = horizon;
  EvolutionState s = initial_state(params, initial);
  if (initial.is_zero()) rec.warnings.emplace_back("initial field is identically zero");
  if (options.on_state) options.on_state(s);

  const bool naive = params.variant == Variant::NaiveEuler;
  for (;;) {
    if (grown_cells(s.f) > options.cell_budget) {
      rec.rows.push_back(make_row(s, std::numeric_limits<double>::quiet_NaN()));
      rec.outcome = Outcome::BudgetExhausted;
      rec.outcome_tau = s.tau;
      break;
    }
    if (s.tau == horizon || naive) {
      const double sup_g = max_abs(neighbor_average(s.f));
      rec.rows.push_back(make_row(s, sup_g));
      if (s.tau == horizon) {
        rec.outcome = Outcome::SurvivedHorizon;
        rec.outcome_tau = horizon;
        break;
      }
      try {
        s = naive_step(s);
      } catch (const NumericOverflowError&) {
        rec.outcome = Outcome::NumericOverflow;
        rec.outcome_tau = s.tau;
        break;
      }
      if (options.on_state) options.on_state(s);
      continue;
    }

    StepOutput out = step_with_average(s);
    rec.rows.push_back(make_row(s, max_abs(out.g)));
    if (options.capture_history) rec.g_history.push_back(out.g);
    if (!out.next.alive()) {
      rec.outcome = Outcome::BlewUp;
      rec.outcome_tau = out.next.tau;
      rec.blowup = out.next.blowup;
      break;
    }
    s = std::move(out.next);
    if (options.on_state) options.on_state(s);
  }

  rec.final_f = s.f;
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

Field duhamel_reconstruct(const KernelTable& kernel, const Field& initial, std::span<const Field> g_history,
                          std::int64_t tau, double alpha) {
  if (tau < 0) throw DomainError("duhamel_reconstruct: tau must be >= 0");
  if (tau > kernel.max_tau) throw DomainError("duhamel_reconstruct: kernel table shorter than tau");
  if (static_cast<std::int64_t>(g_history.size()) < tau)
    throw DomainError("duhamel_reconstruct: history holds fewer than tau averages");
  if (initial.dim() != kernel.d) throw DomainError("duhamel_reconstruct: dimension mismatch");

  Field acc = convolve(kernel.slice(tau), initial);
  for (std::int64_t s = 1; s <= tau; ++s) {
    const Field forcing = g_history[static_cast<std::size_t>(s - 1)].map([alpha](double g) {
      return nonlinearity_H(g, alpha);
    });
    if (forcing.is_zero()) continue;
    acc = add(acc, convolve(kernel.slice(tau - s), forcing));
  }
  return acc;
}

}  // namespace dsheat
