#include "dsheat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "dsheat/bounds.hpp"
#include "dsheat/errors.hpp"
#include "dsheat/kernel.hpp"

namespace dsheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t grown_cells(const Field& f) {
  std::size_t n = 1;
  for (auto e : f.box().extents) n *= static_cast<std::size_t>(e + 2);
  return n;
}

// Logarithmically spaced sample steps: every step below 16, then ~8 per decade.
bool is_sample_step(std::int64_t tau) {
  if (tau < 16) return true;
  const double k = std::round(8.0 * std::log10(static_cast<double>(tau)));
  return static_cast<std::int64_t>(std::llround(std::pow(10.0, k / 8.0))) == tau;
}

double sum_of_powers(const Field& v, double p) {
  std::vector<double> terms;
  terms.reserve(v.cell_count());
  for (double x : v.values()) {
    if (x == 0.0) continue;
    const double a = std::abs(x);
    terms.push_back(p == 3.0 ? a * a * a : p == 2.0 ? a * a : std::pow(a, p));
  }
  return compensated_sum(terms);
}

}  // namespace

Field initial_field(int d, InitShape shape, double eps, std::int64_t width) {
  if (d < 1) throw DomainError("initial_field: d must be >= 1");
  if (!std::isfinite(eps) || eps < 0.0) throw DomainError("initial_field: value must be finite and >= 0");
  const Coord origin(static_cast<std::size_t>(d), 0);
  if (shape == InitShape::PointMass) return Field::point(origin, eps);
  if (width < 1) throw DomainError("initial_field: box width must be >= 1");
  Box box{Coord(static_cast<std::size_t>(d), -(width - 1) / 2), Coord(static_cast<std::size_t>(d), width)};
  std::vector<double> values(box.cell_count(), eps);
  return Field(std::move(box), std::move(values));
}

void SweepSpec::validate() const {
  if (d < 1) throw DomainError("sweep: d must be >= 1");
  if (alphas.empty()) throw DomainError("sweep: alphas must not be empty");
  if (epsilons.empty()) throw DomainError("sweep: epsilons must not be empty");
  if (horizon < 1) throw DomainError("sweep: horizon must be >= 1");
  for (double a : alphas)
    if (!(a > 0.0)) throw DomainError("sweep: every alpha must be positive");
  for (double e : epsilons)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("sweep: every epsilon must be positive");
  if (init_shape == InitShape::Box && box_width < 1) throw DomainError("sweep: box width must be >= 1");
}

std::string_view to_string(SuperCertificate c) {
  switch (c) {
    case SuperCertificate::None:
      return "none";
    case SuperCertificate::ProvedAtHorizon:
      return "proved_at_horizon";
    case SuperCertificate::ExtrapolatedGlobal:
      return "extrapolated_global";
  }
  return "unknown";
}

const SweepCell& SweepResult::at(std::size_t alpha_index, std::size_t eps_index) const {
  return cells.at(alpha_index * spec.epsilons.size() + eps_index);
}

double power_tail_estimate(const std::vector<std::pair<std::int64_t, double>>& samples, double alpha,
                           std::int64_t last_tau) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [tau, m] : samples) {
    if (tau < std::max<std::int64_t>(1, last_tau / 10) || !(m > 0.0)) continue;
    const double x = std::log(static_cast<double>(tau));
    const double y = std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) return kInf;
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) return kInf;
  const double slope = (n * sxy - sx * sy) / denom;
  const double log_c = (sy - slope * sx) / n;
  const double q = -slope * alpha;  // m^alpha ~ C^alpha tau^-q
  if (!(q > 1.0)) return kInf;
  return std::exp(alpha * log_c) * std::pow(static_cast<double>(last_tau), 1.0 - q) / (q - 1.0);
}

namespace {

SweepCell compute_cell(const SweepSpec& spec, double alpha, double eps) {
  SweepCell cell;
  cell.alpha = alpha;
  cell.epsilon = eps;
  try {
    Params p;
    p.d = spec.d;
    p.alpha = alpha;
    const Field f0 = initial_field(spec.d, spec.init_shape, eps, spec.box_width);

    RunOptions opts;
    opts.cell_budget = spec.cell_budget;
    const RunRecord rec = run(p, f0, spec.horizon, opts);
    cell.outcome = rec.outcome;
    cell.outcome_tau = rec.outcome_tau;
    if (rec.outcome == Outcome::BlewUp) cell.blowup_tau = rec.outcome_tau;
    cell.final_l1 = rec.rows.back().l1_f;
    for (const auto& row : rec.rows)
      if (!std::isnan(row.sup_g)) cell.peak_sup_g = std::max(cell.peak_sup_g, row.sup_g);

    const LinearSummary ls = linear_summary(f0, alpha, spec.horizon, true, spec.cell_budget);
    cell.sub_bound_tau = ls.sub_bound;
    cell.m_prefix = ls.m_prefix;
    if (ls.super_lost_tau || ls.budget_exhausted) {
      cell.super_certificate = SuperCertificate::None;
      cell.m_tail_estimate = kNaN;
    } else {
      cell.m_tail_estimate = power_tail_estimate(ls.m_samples, alpha, ls.last_tau);
      cell.super_certificate = cell.m_prefix + cell.m_tail_estimate < 1.0 ? SuperCertificate::ExtrapolatedGlobal
                                                                          : SuperCertificate::ProvedAtHorizon;
    }
  } catch (const Error& e) {
    cell.error = e.what();
    cell.outcome = Outcome::BudgetExhausted;
  }
  return cell;
}

}  // namespace

SweepResult fujita_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  const std::size_t na = spec.alphas.size();
  const std::size_t ne = spec.epsilons.size();
  result.cells.resize(na * ne);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < result.cells.size();)
      result.cells[i] = compute_cell(spec, spec.alphas[i / ne], spec.epsilons[i % ne]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(result.cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<std::size_t> eps_order(ne);
  for (std::size_t j = 0; j < ne; ++j) eps_order[j] = j;
  std::stable_sort(eps_order.begin(), eps_order.end(),
                   [&](std::size_t a, std::size_t b) { return spec.epsilons[a] < spec.epsilons[b]; });

  for (std::size_t i = 0; i < na; ++i) {
    bool ok = true;
    double previous = kInf;
    for (std::size_t j : eps_order) {
      const SweepCell& c = result.at(i, j);
      if (!c.error.empty() || c.outcome == Outcome::BudgetExhausted) continue;
      const double t = c.blowup_tau ? static_cast<double>(*c.blowup_tau) : kInf;
      if (t > previous) ok = false;
      previous = t;
    }
    result.monotone_in_epsilon.emplace_back(spec.alphas[i], ok);
  }

  for (std::size_t j = 0; j < ne; ++j) {
    PhaseBoundary b;
    b.epsilon = spec.epsilons[j];
    for (std::size_t i = 0; i < na; ++i) {
      const SweepCell& c = result.at(i, j);
      if (c.outcome == Outcome::BlewUp && (!b.largest_alpha_blown_up || c.alpha > *b.largest_alpha_blown_up))
        b.largest_alpha_blown_up = c.alpha;
      if (c.outcome == Outcome::SurvivedHorizon &&
          (!b.smallest_alpha_survived || c.alpha < *b.smallest_alpha_survived))
        b.smallest_alpha_survived = c.alpha;
    }
    result.boundaries.push_back(b);
  }
  return result;
}

// ---------------------------------------------------------------------------

double critical_l1_bound_4pi(int d) {
  return 0.5 * std::pow(4.0 * std::numbers::pi / d, d / 2.0);
}

double critical_l1_bound_clt(int d) {
  return 0.5 * std::pow(2.0 * std::numbers::pi / d, d / 2.0);
}

std::string_view to_string(CriticalEvent e) {
  switch (e) {
    case CriticalEvent::BlewUp:
      return "blew_up";
    case CriticalEvent::BoundExceeded:
      return "bound_exceeded";
    case CriticalEvent::Inconclusive:
      return "inconclusive";
    case CriticalEvent::BudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

CriticalReport critical_case_study(int d, const std::vector<double>& epsilons, std::int64_t horizon,
                                   std::size_t cell_budget, bool stop_at_exceedance) {
  if (d < 1) throw DomainError("critical_case_study: d must be >= 1");
  if (horizon < 0) throw DomainError("critical_case_study: horizon must be >= 0");
  CriticalReport report;
  report.d = d;
  report.alpha = 2.0 / d;
  report.horizon = horizon;
  report.bound_4pi = critical_l1_bound_4pi(d);
  report.bound_clt = critical_l1_bound_clt(d);

  Params p;
  p.d = d;
  p.alpha = report.alpha;
  for (double eps : epsilons) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("critical_case_study: epsilons must be positive");
    CriticalCase cc;
    cc.epsilon = eps;
    EvolutionState s = initial_state(p, initial_field(d, InitShape::PointMass, eps));
    bool budget_hit = false;
    for (;;) {
      const double l1 = l1_norm(s.f);
      cc.max_l1 = std::max(cc.max_l1, l1);
      if (!cc.exceed_tau_4pi && l1 > report.bound_4pi) cc.exceed_tau_4pi = s.tau;
      if (!cc.exceed_tau_clt && l1 > report.bound_clt) cc.exceed_tau_clt = s.tau;
      cc.last_tau = s.tau;
      const bool last = s.tau == horizon || (stop_at_exceedance && cc.exceed_tau_4pi);
      if (is_sample_step(s.tau) || last) cc.trajectory.push_back({s.tau, l1, max_abs(s.f)});
      if (last) break;
      if (grown_cells(s.f) > cell_budget) {
        budget_hit = true;
        if (cc.trajectory.back().tau != s.tau) cc.trajectory.push_back({s.tau, l1, max_abs(s.f)});
        break;
      }
      EvolutionState n = step(s);
      if (!n.alive()) {
        cc.blowup_tau = n.blowup->at_tau;
        if (cc.trajectory.back().tau != s.tau) cc.trajectory.push_back({s.tau, l1, max_abs(s.f)});
        break;
      }
      s = std::move(n);
    }
    if (cc.blowup_tau)
      cc.event = CriticalEvent::BlewUp;
    else if (cc.exceed_tau_4pi)
      cc.event = CriticalEvent::BoundExceeded;
    else if (budget_hit)
      cc.event = CriticalEvent::BudgetExhausted;
    else
      cc.event = CriticalEvent::Inconclusive;
    report.cases.push_back(std::move(cc));
  }
  return report;
}

// ---------------------------------------------------------------------------

KernelAsymReport kernel_asymptotics_report(int d, std::int64_t max_tau, std::size_t cell_budget) {
  if (d < 1) throw DomainError("kernel_asymptotics_report: d must be >= 1");
  if (max_tau < 0) throw DomainError("kernel_asymptotics_report: max_tau must be >= 0");
  KernelAsymReport r;
  r.d = d;
  r.max_tau = max_tau;
  r.constant_4pi = origin_constant_4pi(d);
  r.constant_clt = origin_constant_clt(d);
  r.rows.reserve(static_cast<std::size_t>(max_tau) + 1);

  auto record = [&](std::int64_t tau, double u0, double mass) {
    KernelAsymRow row{tau, u0, mass, kNaN, kNaN, kNaN};
    if (tau >= 1) row.scaled = u0 * std::pow(static_cast<double>(tau), d / 2.0);
    if (tau >= 2 && tau % 2 == 0) {
      row.ratio_4pi = asymptotic_ratio(u0, d, tau, r.constant_4pi);
      row.ratio_clt = asymptotic_ratio(u0, d, tau, r.constant_clt);
    }
    r.max_mass_error = std::max(r.max_mass_error, std::abs(mass - 1.0));
    r.rows.push_back(row);
  };

  if (d == 3) {
    SymmetricKernelStream3 ks(max_tau, cell_budget);
    record(0, ks.origin(), ks.mass());
    while (ks.tau() < max_tau) {
      ks.advance();
      record(ks.tau(), ks.origin(), ks.mass());
    }
  } else {
    KernelStream ks(d, cell_budget);
    record(0, ks.origin(), ks.mass());
    while (ks.tau() < max_tau) {
      ks.advance();
      record(ks.tau(), ks.origin(), ks.mass());
    }
  }

  const std::int64_t last_even = max_tau - (max_tau % 2);
  if (last_even >= 4) {
    const double a = r.rows[static_cast<std::size_t>(last_even)].scaled;
    const double b = r.rows[static_cast<std::size_t>(last_even - 2)].scaled;
    r.tail_change = std::abs(a - b) / std::abs(b);
    r.converged = r.tail_change < 0.01;
  }
  return r;
}

// ---------------------------------------------------------------------------

NormGrowthReport duhamel_norm_growth(int d, double alpha, const Field& f0, std::int64_t horizon,
                                     std::size_t cell_budget) {
  if (horizon < 0) throw DomainError("duhamel_norm_growth: horizon must be >= 0");
  Params p;
  p.d = d;
  p.alpha = alpha;
  EvolutionState s = initial_state(p, f0);

  NormGrowthReport r;
  r.c = sup_norm(f0);
  const double kernel_factor = std::pow(r.c, 1.0 + alpha) / alpha;
  KernelStream ks(d, cell_budget);
  std::vector<double> h_terms;
  double lower_h = 0.0;
  double lower_k = 0.0;
  r.rows.push_back({0, l1_norm(s.f), 0.0, 0.0});

  for (std::int64_t tau = 1; tau <= horizon; ++tau) {
    if (grown_cells(s.f) > cell_budget) throw ResourceLimitError("duhamel_norm_growth: cell budget exhausted");
    StepOutput out = step_with_average(s);
    if (!out.next.alive()) {
      r.blew_up = true;
      break;
    }
    h_terms.clear();
    for (double g : out.g.values())
      if (g > 0.0) h_terms.push_back(nonlinearity_H(g, alpha));
    lower_h += compensated_sum(h_terms);
    ks.advance();
    lower_k += kernel_factor * sum_of_powers(ks.current(), 1.0 + alpha);
    s = std::move(out.next);

    const NormGrowthRow row{tau, l1_norm(s.f), lower_h, lower_k};
    const double limit = row.l1_f * (1.0 + 1e-9);
    if ((row.lower_h > limit || row.lower_kernel > limit) && r.bounds_hold) {
      r.bounds_hold = false;
      r.first_violation = tau;
    }
    r.rows.push_back(row);
  }
  return r;
}

HarmonicGrowthReport harmonic_growth_check(int d, std::int64_t s_lo, std::int64_t s_hi, double tolerance,
                                           std::size_t cell_budget) {
  if (d < 1) throw DomainError("harmonic_growth_check: d must be >= 1");
  if (s_lo < 1 || s_hi <= s_lo) throw DomainError("harmonic_growth_check: need 1 <= s_lo < s_hi");
  HarmonicGrowthReport r;
  r.d = d;
  r.s_lo = s_lo;
  r.s_hi = s_hi;
  const double p = 1.0 + 2.0 / d;
  r.predicted_slope_4pi = d * std::pow(2.0, 2.0 / d) / (2.0 * std::numbers::pi) *
                            std::pow(1.0 / d + 2.0 / (static_cast<double>(d) * d), -d / 2.0);
  r.predicted_slope_clt =
      std::pow(2.0, 2.0 / d) * d / (2.0 * std::numbers::pi) * std::pow(static_cast<double>(d) / (d + 2), d / 2.0);

  std::vector<double> partial(static_cast<std::size_t>(s_hi) + 1, 0.0);
  KernelStream ks(d, cell_budget);
  double sum = 0.0;
  double comp = 0.0;
  for (std::int64_t tau = 1; tau <= s_hi; ++tau) {
    ks.advance();
    const double x = sum_of_powers(ks.current(), p);
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
    partial[static_cast<std::size_t>(tau)] = sum + comp;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::int64_t tau = s_lo; tau <= s_hi; ++tau) {
    if (!is_sample_step(tau) && tau != s_lo && tau != s_hi) continue;
    const double x = std::log(static_cast<double>(tau));
    const double y = partial[static_cast<std::size_t>(tau)];
    r.samples.emplace_back(tau, y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  r.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  constexpr int kPieces = 4;
  const double ratio = static_cast<double>(s_hi) / static_cast<double>(s_lo);
  std::int64_t prev = s_lo;
  r.linear_in_log = r.fitted_slope > 0.0;
  for (int j = 1; j <= kPieces; ++j) {
    const std::int64_t cur =
        j == kPieces ? s_hi : static_cast<std::int64_t>(std::llround(s_lo * std::pow(ratio, double(j) / kPieces)));
    const double slope = (partial[static_cast<std::size_t>(cur)] - partial[static_cast<std::size_t>(prev)]) /
                         std::log(static_cast<double>(cur) / static_cast<double>(prev));
    r.local_slopes.push_back(slope);
    const double dev = std::abs(slope / r.fitted_slope - 1.0);
    r.max_relative_deviation = std::max(r.max_relative_deviation, dev);
    if (!(dev <= tolerance)) r.linear_in_log = false;
    prev = cur;
  }
  return r;
}

}  // namespace dsheat
