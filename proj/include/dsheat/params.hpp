#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace dsheat {

enum class Variant {
  Standard,    ///< f' = g / (1 - g^a)^(1/a)
  Signed,      ///< f' = g / (1 - |g|^a)^(1/a), admits negative data
  NaiveEuler,  ///< forward Euler in time, central differences in space
};

std::string_view to_string(Variant v);
/// Parses "standard", "signed" or "naive"; throws DomainError otherwise.
Variant parse_variant(std::string_view name);

/// Problem description shared by every evolution mode.
///
/// `delta` selects the scaled form F' = G / (1 - a*delta*G^a)^(1/a) for the
/// Standard and Signed variants. For NaiveEuler it is the time step of the
/// Euler update (absent means 0). `naive_lambda` is delta/xi^2 and is only
/// read by NaiveEuler.
struct Params {
  int d = 1;
  double alpha = 1.0;
  std::optional<double> delta;
  Variant variant = Variant::Standard;
  double naive_lambda = 0.0;

  /// Throws DomainError naming the offending field.
  void validate() const;

  /// Lattice spacing xi = sqrt(2 d delta) of the scaled form; requires delta.
  double xi() const;

  bool scaled() const { return delta.has_value() && variant != Variant::NaiveEuler; }
};

/// Default cap on the number of cells a single field or table may occupy.
inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 26;

}  // namespace dsheat
