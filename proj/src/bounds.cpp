#include "dsheat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsheat/errors.hpp"

namespace dsheat {

namespace {

void require_standard(const Params& params) {
  if (params.variant != Variant::Standard || params.scaled())
    throw DomainError("sandwich bounds require the unscaled standard variant");
}

std::string site_text(const Coord& n) {
  std::string s = "(";
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(n[k]);
  }
  return s + ")";
}

}  // namespace

std::optional<Field> subsolution(const Field& h, double alpha, std::int64_t tau) {
  const double t = static_cast<double>(tau);
  for (double v : h.values()) {
    if (v > 0.0 && !(1.0 - t * std::pow(v, alpha) > 0.0)) return std::nullopt;
  }
  if (tau == 0) return h;
  return h.map([&](double v) { return v == 0.0 ? 0.0 : v * std::pow(1.0 - t * std::pow(v, alpha), -1.0 / alpha); });
}

std::optional<Field> supersolution(const Field& h, double alpha, double m_prefix) {
  if (!(m_prefix < 1.0)) return std::nullopt;
  return h.scaled(std::pow(1.0 - m_prefix, -1.0 / alpha));
}

SandwichState init_sandwich(const Params& params, const Field& f0) {
  require_standard(params);
  SandwichState s{0, f0, 0.0, std::nullopt, std::nullopt, initial_state(params, f0)};
  s.m_prefix = std::pow(sup_norm(f0), params.alpha);
  s.sub = subsolution(s.h, params.alpha, 0);
  s.super = supersolution(s.h, params.alpha, s.m_prefix);
  return s;
}

SandwichState advance_sandwich(const SandwichState& state) {
  const double alpha = state.f.params.alpha;
  SandwichState next{state.tau + 1, neighbor_average(state.h), state.m_prefix, std::nullopt, std::nullopt,
                     state.f.alive() ? step(state.f) : state.f};
  next.m_prefix += std::pow(sup_norm(next.h), alpha);
  next.sub = subsolution(next.h, alpha, next.tau);
  if (state.super) next.super = supersolution(next.h, alpha, next.m_prefix);
  return next;
}

SandwichReport check_sandwich(const SandwichState& state, double tol) {
  SandwichReport r;
  const bool alive = state.f.alive();
  if (alive && !state.sub) {
    r.ok = false;
    r.message = "tau " + std::to_string(state.tau) + ": solution alive but subsolution does not exist";
    return r;
  }
  if (state.super && !alive) {
    r.ok = false;
    r.message = "tau " + std::to_string(state.tau) + ": supersolution exists but solution blew up";
    r.site = state.f.blowup->witness;
    return r;
  }
  if (!alive) return r;

  if (state.sub) {
    const SiteValue e = max_excess(*state.sub, state.f.f);
    r.worst_sub_excess = e.value;
    if (e.value > tol) {
      r.ok = false;
      r.message = "tau " + std::to_string(state.tau) + ": sub exceeds f by " + std::to_string(e.value) + " at " +
                  site_text(e.site);
      r.site = e.site;
      return r;
    }
  }
  if (state.super) {
    const SiteValue e = max_excess(state.f.f, *state.super);
    r.worst_super_excess = e.value;
    if (e.value > tol) {
      r.ok = false;
      r.message = "tau " + std::to_string(state.tau) + ": f exceeds super by " + std::to_string(e.value) + " at " +
                  site_text(e.site);
      r.site = e.site;
    }
  }
  return r;
}

std::optional<std::int64_t> subsolution_blowup_bound(const Field& f0, const Params& params, std::int64_t horizon,
                                                     std::size_t cell_budget) {
  require_standard(params);
  if (f0.is_zero()) throw DomainError("subsolution_blowup_bound: initial field is identically zero");
  const LinearSummary s = linear_summary(f0, params.alpha, horizon, true, cell_budget);
  if (s.budget_exhausted && !s.sub_bound)
    throw ResourceLimitError("subsolution_blowup_bound: cell budget exhausted at tau " + std::to_string(s.last_tau));
  return s.sub_bound;
}

double subsolution_step_violation(const Field& sub, const Field& sub_next, double alpha) {
  const Field avg = neighbor_average(sub);
  double worst = -std::numeric_limits<double>::infinity();
  avg.for_each([&](std::span<const std::int64_t> n, double m) {
    if (!(m > 0.0)) return;
    const double rhs = std::pow(m, -alpha) - 1.0;
    if (!(rhs > 0.0)) return;
    const double next = sub_next.at(n);
    const double lhs = next > 0.0 ? std::pow(next, -alpha) : std::numeric_limits<double>::infinity();
    worst = std::max(worst, (rhs - lhs) / std::max(1.0, rhs));
  });
  return worst;
}

LinearSummary linear_summary(const Field& f0, double alpha, std::int64_t horizon, bool stop_when_decided,
                             std::size_t cell_budget) {
  if (horizon < 0) throw DomainError("linear_summary: horizon must be >= 0");
  LinearSummary out;
  Field h = f0;
  std::int64_t next_sample = 1;
  for (std::int64_t tau = 0;; ++tau) {
    const double m = sup_norm(h);
    const double ma = std::pow(m, alpha);
    out.m_prefix += ma;
    out.last_tau = tau;
    if (!out.sub_bound && static_cast<double>(tau) * ma >= 1.0) out.sub_bound = tau;
    if (!out.super_lost_tau && out.m_prefix >= 1.0) out.super_lost_tau = tau;
    if (tau >= next_sample || tau == horizon) {
      out.m_samples.emplace_back(tau, m);
      next_sample = std::max(next_sample + 1, static_cast<std::int64_t>(std::ceil(next_sample * 1.25)));
    }
    if (tau == horizon) break;
    if (stop_when_decided && out.sub_bound && out.super_lost_tau) break;
    std::size_t cells = 1;
    for (auto e : h.box().extents) cells *= static_cast<std::size_t>(e + 2);
    if (cells > cell_budget) {
      out.budget_exhausted = true;
      break;
    }
    h = neighbor_average(h);
  }
  return out;
}

}  // namespace dsheat
