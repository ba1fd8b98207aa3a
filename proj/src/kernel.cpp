#include "dsheat/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dsheat/errors.hpp"

namespace dsheat {

const Field& KernelTable::slice(std::int64_t tau) const {
  if (tau < 0 || tau > max_tau) throw DomainError("KernelTable: tau " + std::to_string(tau) + " outside [0, max_tau]");
  return slices[static_cast<std::size_t>(tau)];
}

KernelTable build_kernel(int d, std::int64_t max_tau, std::size_t cell_budget) {
  if (d < 1) throw DomainError("build_kernel: d must be >= 1");
  if (max_tau < 0) throw DomainError("build_kernel: max_tau must be >= 0");

  // Slice tau fits in the box [-tau, tau]^d.
  double estimate = 0.0;
  for (std::int64_t t = 0; t <= max_tau; ++t) estimate += std::pow(2.0 * static_cast<double>(t) + 1.0, d);
  if (estimate > static_cast<double>(cell_budget))
    throw ResourceLimitError("build_kernel: ~" + std::to_string(static_cast<long long>(estimate)) +
                             " cells exceed the budget of " + std::to_string(cell_budget));

  KernelTable table;
  table.d = d;
  table.max_tau = max_tau;
  table.slices.reserve(static_cast<std::size_t>(max_tau) + 1);
  table.slices.push_back(Field::point(Coord(static_cast<std::size_t>(d), 0), 1.0));
  for (std::int64_t t = 0; t < max_tau; ++t) table.slices.push_back(neighbor_average(table.slices.back()));
  return table;
}

Field green(const KernelTable& table, std::int64_t tau) {
  if (tau < 0 || tau > table.max_tau + 1)
    throw DomainError("green: tau " + std::to_string(tau) + " outside [0, max_tau + 1]");
  if (tau == 0) return Field(table.d);
  return table.slices[static_cast<std::size_t>(tau - 1)];
}

Field convolve(const Field& kernel_slice, const Field& data, std::size_t cell_budget) {
  const int d = kernel_slice.dim();
  if (data.dim() != d) throw DomainError("convolve: dimension mismatch");
  const Box& ka = kernel_slice.box();
  const Box& db = data.box();
  Box ob{Coord(static_cast<std::size_t>(d)), Coord(static_cast<std::size_t>(d))};
  for (int k = 0; k < d; ++k) {
    ob.lo[k] = ka.lo[k] + db.lo[k];
    ob.extents[k] = ka.extents[k] + db.extents[k] - 1;
  }
  if (ob.cell_count() > cell_budget)
    throw ResourceLimitError("convolve: result box of " + std::to_string(ob.cell_count()) + " cells exceeds budget");

  std::vector<double> out(ob.cell_count(), 0.0);
  const auto os = ob.strides();
  const auto kv = kernel_slice.values();
  const std::size_t row = static_cast<std::size_t>(ka.extents[d - 1]);
  const std::size_t rows = kv.size() / row;

  // Offset of each kernel row inside the output layout.
  std::vector<std::size_t> row_offset(rows);
  {
    Coord r(static_cast<std::size_t>(d), 0);
    for (std::size_t q = 0; q < rows; ++q) {
      std::size_t off = 0;
      for (int k = 0; k < d - 1; ++k) off += static_cast<std::size_t>(r[k]) * os[k];
      row_offset[q] = off;
      for (int k = d - 2; k >= 0; --k) {
        if (++r[k] < ka.extents[k]) break;
        r[k] = 0;
      }
    }
  }

  data.for_each([&](std::span<const std::int64_t> m, double w) {
    if (w == 0.0) return;
    std::size_t base = 0;
    for (int k = 0; k < d; ++k) base += static_cast<std::size_t>(m[k] - db.lo[k]) * os[k];
    for (std::size_t q = 0; q < rows; ++q) {
      double* o = out.data() + base + row_offset[q];
      const double* src = kv.data() + q * row;
      for (std::size_t j = 0; j < row; ++j) o[j] += w * src[j];
    }
  });
  return Field(std::move(ob), std::move(out));
}

double origin_constant_4pi(int d) {
  return 2.0 * std::pow(d / (4.0 * std::numbers::pi), d / 2.0);
}

double origin_constant_clt(int d) {
  return 2.0 * std::pow(d / (2.0 * std::numbers::pi), d / 2.0);
}

double asymptotic_ratio(double u_origin, int d, std::int64_t tau, double constant) {
  if (tau < 2 || tau % 2 != 0)
    throw DomainError("asymptotic_ratio: tau must be even and >= 2 (U^tau_0 vanishes for odd tau)");
  return u_origin / (constant * std::pow(static_cast<double>(tau), -d / 2.0));
}

double asymptotic_ratio(const KernelTable& table, std::int64_t tau, double constant) {
  const Coord origin(static_cast<std::size_t>(table.d), 0);
  return asymptotic_ratio(table.slice(tau).at(origin), table.d, tau, constant);
}

}  // namespace dsheat
