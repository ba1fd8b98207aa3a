#include "dsheat/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "dsheat/errors.hpp"
#include "dsheat/evolution.hpp"

namespace dsheat {

namespace {

constexpr double kPhiSlack = 1e-9;
constexpr double kHSlack = 1e-12;
constexpr double kMonotoneSlack = 1e-12;

double update_value(double x, double alpha) {
  if (x == 0.0) return 0.0;
  return x * std::exp(-std::log1p(-std::pow(x, alpha)) / alpha);
}

std::string describe(std::span<const double> xs, double alpha) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha << " xs=[";
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << "]";
  return os.str();
}

// alpha in (0, 4]
double draw_alpha(std::mt19937_64& rng) {
  return 4.0 * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

// g in [0, 1); half the draws crowd toward 1 on a log scale.
double draw_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < 0.5) return u(rng);
  return 1.0 - std::pow(10.0, -12.0 * u(rng) - 1e-3);
}

void record(SuiteResult& r, double margin, const std::string& what, bool violated) {
  ++r.samples;
  if (violated) ++r.violations;
  if (r.samples == 1 || margin < r.worst_margin) {
    r.worst_margin = margin;
    r.worst_case = what;
  }
}

}  // namespace

double phi(std::span<const double> xs, double alpha) {
  if (xs.empty()) throw DomainError("phi: need at least one argument");
  if (!(alpha > 0.0)) throw DomainError("phi: alpha must be positive");
  std::vector<double> sorted(xs.begin(), xs.end());
  for (double x : sorted) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("phi: arguments must be finite and non-negative");
  }
  // Summing in sorted order makes the result independent of argument order.
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  double power_sum = 0.0;
  for (double x : sorted) {
    sum += x;
    power_sum += std::pow(x, 1.0 + alpha);
  }
  if (sum == 0.0) throw DomainError("phi: arguments must not all be zero");
  const double n = static_cast<double>(sorted.size());
  return std::pow(n, alpha) * power_sum - std::pow(sum, 1.0 + alpha);
}

HBoundCheck h_lower_bound_check(double g, double alpha) {
  HBoundCheck c;
  c.h = nonlinearity_H(g, alpha);
  c.rhs = std::pow(g, 1.0 + alpha) / alpha;
  c.ok = c.h >= c.rhs - kHSlack;
  return c;
}

bool update_monotone_check(double x, double y, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("update_monotone_check: alpha must be positive");
  if (!(x >= 0.0) || !(x <= y) || !(y < 1.0)) throw DomainError("update_monotone_check: need 0 <= x <= y < 1");
  return update_value(x, alpha) <= update_value(y, alpha) * (1.0 + kMonotoneSlack);
}

SuiteResult phi_suite(std::uint64_t seed, std::int64_t samples) {
  SuiteResult r{"phi_nonnegative", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<double> xs;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double alpha = draw_alpha(rng);
    xs.assign(static_cast<std::size_t>(size(rng)), 0.0);
    for (double& x : xs) x = coin(rng) < 0.2 ? 0.0 : value(rng);
    if (std::all_of(xs.begin(), xs.end(), [](double x) { return x == 0.0; })) xs[0] = value(rng) + 1e-3;

    double sum = 0.0;
    for (double x : xs) sum += x;
    const double scale = std::max(1.0, std::pow(sum, 1.0 + alpha));
    const double p = phi(xs, alpha);
    bool bad = p < -kPhiSlack * scale;

    std::vector<double> shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (phi(shuffled, alpha) != p) bad = true;

    std::vector<double> equal(xs.size(), xs[0] > 0.0 ? xs[0] : 1.0);
    const double e = phi(equal, alpha);
    const double equal_scale = std::pow(static_cast<double>(equal.size()) * equal[0], 1.0 + alpha);
    if (std::abs(e) > 1e-12 * equal_scale) bad = true;

    record(r, p / scale, describe(xs, alpha), bad);
  }
  return r;
}

SuiteResult h_bound_suite(std::uint64_t seed, std::int64_t samples) {
  SuiteResult r{"h_lower_bound", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  for (std::int64_t i = 0; i < samples; ++i) {
    const double alpha = draw_alpha(rng);
    const double g = draw_unit(rng);
    const HBoundCheck c = h_lower_bound_check(g, alpha);
    const double xs[] = {g};
    record(r, c.h - c.rhs, describe(xs, alpha), !c.ok);
  }
  return r;
}

SuiteResult monotone_suite(std::uint64_t seed, std::int64_t samples) {
  SuiteResult r{"update_monotone", 0, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::int64_t i = 0; i < samples; ++i) {
    const double alpha = draw_alpha(rng);
    double x = draw_unit(rng);
    double y = draw_unit(rng);
    if (x > y) std::swap(x, y);
    if (u(rng) < 0.1) x = y;
    const double ux = update_value(x, alpha);
    const double uy = update_value(y, alpha);
    const double margin = uy > 0.0 ? (uy - ux) / uy : 0.0;
    const double xs[] = {x, y};
    record(r, margin, describe(xs, alpha), !update_monotone_check(x, y, alpha));
  }
  return r;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed, std::int64_t samples) {
  return {phi_suite(seed, samples), h_bound_suite(seed + 1, samples), monotone_suite(seed + 2, samples)};
}

}  // namespace dsheat
