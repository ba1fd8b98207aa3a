#include "dsheat/params.hpp"

#include <cmath>

#include "dsheat/errors.hpp"

namespace dsheat {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Standard:
      return "standard";
    case Variant::Signed:
      return "signed";
    case Variant::NaiveEuler:
      return "naive";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "standard") return Variant::Standard;
  if (name == "signed") return Variant::Signed;
  if (name == "naive") return Variant::NaiveEuler;
  throw DomainError("variant: expected standard|signed|naive, got '" + std::string(name) + "'");
}

void Params::validate() const {
  if (d < 1) throw DomainError("d: lattice dimension must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha: must be a finite positive real");
  if (delta) {
    const bool ok = variant == Variant::NaiveEuler ? *delta >= 0.0 : *delta > 0.0;
    if (!ok || !std::isfinite(*delta)) throw DomainError("delta: must be a finite positive real");
  }
  if (variant == Variant::NaiveEuler) {
    if (!(naive_lambda >= 0.0) || !std::isfinite(naive_lambda))
      throw DomainError("lambda: must be a finite non-negative real");
    if (1.0 - 2.0 * d * naive_lambda < 0.0)
      throw DomainError("lambda: 1 - 2*d*lambda must be >= 0 for a stable linear part");
  }
}

double Params::xi() const {
  if (!delta) throw DomainError("xi: requires delta");
  return std::sqrt(2.0 * d * *delta);
}

}  // namespace dsheat
