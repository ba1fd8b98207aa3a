#include "dsheat/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsheat/errors.hpp"

namespace dsheat {

std::size_t Box::cell_count() const {
  std::size_t n = 1;
  for (auto e : extents) n *= static_cast<std::size_t>(e);
  return n;
}

bool Box::contains(std::span<const std::int64_t> n) const {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (n[k] < lo[k] || n[k] >= lo[k] + extents[k]) return false;
  }
  return true;
}

std::size_t Box::index_of(std::span<const std::int64_t> n) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    idx = idx * static_cast<std::size_t>(extents[k]) + static_cast<std::size_t>(n[k] - lo[k]);
  }
  return idx;
}

std::vector<std::size_t> Box::strides() const {
  std::vector<std::size_t> s(lo.size());
  std::size_t acc = 1;
  for (std::size_t k = lo.size(); k-- > 0;) {
    s[k] = acc;
    acc *= static_cast<std::size_t>(extents[k]);
  }
  return s;
}

Coord Box::coord_of(std::size_t index) const {
  Coord n(lo);
  for (std::size_t k = lo.size(); k-- > 0;) {
    const auto e = static_cast<std::size_t>(extents[k]);
    n[k] += static_cast<std::int64_t>(index % e);
    index /= e;
  }
  return n;
}

Box union_box(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) throw DomainError("union_box: dimension mismatch");
  Box out{Coord(a.lo.size()), Coord(a.lo.size())};
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    const auto lo = std::min(a.lo[k], b.lo[k]);
    const auto hi = std::max(a.lo[k] + a.extents[k], b.lo[k] + b.extents[k]);
    out.lo[k] = lo;
    out.extents[k] = hi - lo;
  }
  return out;
}

// ---------------------------------------------------------------------------

Field::Field(int dim) : box_{Coord(static_cast<std::size_t>(dim), 0), Coord(static_cast<std::size_t>(dim), 1)}, values_(1, 0.0) {
  if (dim < 1) throw DomainError("Field: dimension must be >= 1");
}

Field::Field(Box box, std::vector<double> values) : box_(std::move(box)), values_(std::move(values)) {
  if (box_.dim() < 1 || box_.extents.size() != box_.lo.size())
    throw DomainError("Field: box must have matching lo/extents of dimension >= 1");
  for (auto e : box_.extents) {
    if (e < 1) throw DomainError("Field: extents must be positive");
  }
  if (values_.size() != box_.cell_count())
    throw DomainError("Field: expected " + std::to_string(box_.cell_count()) + " values, got " +
                      std::to_string(values_.size()));
  for (double x : values_) {
    if (!std::isfinite(x)) throw DomainError("Field: values must be finite");
  }
  trim();
}

Field::Field(Box box, std::vector<double> values, Unchecked) : box_(std::move(box)), values_(std::move(values)) {
  trim();
}

Field Field::point(std::span<const std::int64_t> site, double value) {
  const auto d = site.size();
  return Field(Box{Coord(site.begin(), site.end()), Coord(d, 1)}, std::vector<double>{value});
}

Field Field::from_sites(int dim, const std::vector<std::pair<Coord, double>>& sites) {
  if (sites.empty()) return Field(dim);
  Coord lo = sites.front().first;
  Coord hi = lo;
  for (const auto& [n, v] : sites) {
    if (static_cast<int>(n.size()) != dim) throw DomainError("from_sites: coordinate dimension mismatch");
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], n[k]);
      hi[k] = std::max(hi[k], n[k]);
    }
  }
  Box box{lo, Coord(static_cast<std::size_t>(dim))};
  for (int k = 0; k < dim; ++k) box.extents[k] = hi[k] - lo[k] + 1;
  std::vector<double> values(box.cell_count(), 0.0);
  for (const auto& [n, v] : sites) values[box.index_of(n)] += v;
  return Field(std::move(box), std::move(values));
}

double Field::at(std::span<const std::int64_t> n) const {
  if (static_cast<int>(n.size()) != dim()) throw DomainError("Field::at: coordinate dimension mismatch");
  return box_.contains(n) ? values_[box_.index_of(n)] : 0.0;
}

std::size_t Field::support_size() const {
  return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double x) { return x != 0.0; }));
}

bool Field::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
}

bool Field::all_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
}

Field Field::translated(std::span<const std::int64_t> shift) const {
  if (static_cast<int>(shift.size()) != dim()) throw DomainError("translated: shift dimension mismatch");
  Field out = *this;
  for (int k = 0; k < dim(); ++k) out.box_.lo[k] += shift[k];
  return out;
}

Field Field::scaled(double factor) const {
  return map([factor](double x) { return x * factor; });
}

void Field::trim() {
  const int d = dim();
  const std::size_t count = values_.size();
  Coord first(static_cast<std::size_t>(d), 0);
  Coord last(static_cast<std::size_t>(d), -1);
  bool any = false;

  if (d == 1) {
    std::size_t i = 0;
    while (i < count && values_[i] == 0.0) ++i;
    if (i < count) {
      std::size_t j = count - 1;
      while (values_[j] == 0.0) --j;
      first[0] = static_cast<std::int64_t>(i);
      last[0] = static_cast<std::int64_t>(j);
      any = true;
    }
  } else {
    // Row by row: the first and last nonzero of each row bound the last
    // axis; any nonzero in a row marks its outer coordinates.
    const std::size_t row = static_cast<std::size_t>(box_.extents[d - 1]);
    Coord r(static_cast<std::size_t>(d - 1), 0);
    for (std::size_t base = 0; base < count; base += row) {
      const double* v = values_.data() + base;
      std::size_t i = 0;
      while (i < row && v[i] == 0.0) ++i;
      if (i < row) {
        std::size_t j = row - 1;
        while (v[j] == 0.0) --j;
        if (!any) {
          for (int k = 0; k < d - 1; ++k) first[k] = last[k] = r[k];
          first[d - 1] = static_cast<std::int64_t>(i);
          last[d - 1] = static_cast<std::int64_t>(j);
          any = true;
        } else {
          for (int k = 0; k < d - 1; ++k) {
            first[k] = std::min(first[k], r[k]);
            last[k] = std::max(last[k], r[k]);
          }
          first[d - 1] = std::min(first[d - 1], static_cast<std::int64_t>(i));
          last[d - 1] = std::max(last[d - 1], static_cast<std::int64_t>(j));
        }
      }
      for (int k = d - 2; k >= 0; --k) {
        if (++r[k] < box_.extents[k]) break;
        r[k] = 0;
      }
    }
  }

  if (!any) {
    // Canonical zero: one cell at the origin.
    box_.lo.assign(static_cast<std::size_t>(d), 0);
    box_.extents.assign(static_cast<std::size_t>(d), 1);
    values_.assign(1, 0.0);
    return;
  }

  bool tight = true;
  for (int k = 0; k < d; ++k) {
    if (first[k] != 0 || last[k] != box_.extents[k] - 1) tight = false;
  }
  if (tight) return;

  Box sub{Coord(static_cast<std::size_t>(d)), Coord(static_cast<std::size_t>(d))};
  for (int k = 0; k < d; ++k) {
    sub.lo[k] = box_.lo[k] + first[k];
    sub.extents[k] = last[k] - first[k] + 1;
  }
  std::vector<double> out(sub.cell_count());
  const auto in_strides = box_.strides();
  const std::size_t row = static_cast<std::size_t>(sub.extents[d - 1]);
  const std::size_t rows = out.size() / row;
  Coord r(static_cast<std::size_t>(d), 0);  // position within sub, outer axes only
  for (std::size_t q = 0; q < rows; ++q) {
    std::size_t src = static_cast<std::size_t>(first[d - 1]);
    for (int k = 0; k < d - 1; ++k) src += static_cast<std::size_t>(first[k] + r[k]) * in_strides[k];
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(src), row,
                out.begin() + static_cast<std::ptrdiff_t>(q * row));
    for (int k = d - 2; k >= 0; --k) {
      if (++r[k] < sub.extents[k]) break;
      r[k] = 0;
    }
  }
  box_ = std::move(sub);
  values_ = std::move(out);
}

// ---------------------------------------------------------------------------

Field neighbor_average_1d(const Field& v, std::vector<double>& out) {
  const auto in = v.values();
  const std::size_t n = in.size();
  out.assign(n + 2, 0.0);
  // out[i] sits at in-index i-1; its neighbors are in[i-2] and in[i].
  for (std::size_t i = 0; i < n + 2; ++i) {
    const double left = i >= 2 ? in[i - 2] : 0.0;
    const double right = i < n ? in[i] : 0.0;
    out[i] = (left + right) * 0.5;
  }
  return Field(Box{Coord{v.box().lo[0] - 1}, Coord{static_cast<std::int64_t>(n) + 2}}, std::move(out),
               Field::Unchecked{});
}

Field neighbor_average_2d(const Field& v, std::vector<double>& out) {
  const Box& ib = v.box();
  const auto rows_in = static_cast<std::size_t>(ib.extents[0]);
  const auto n = static_cast<std::size_t>(ib.extents[1]);
  const std::size_t w = n + 2;
  out.resize((rows_in + 2) * w);
  const double* in = v.values().data();
  for (std::size_t r = 0; r < rows_in + 2; ++r) {
    // Output row r sits over input row r - 1.
    const double* minus = r >= 2 ? in + (r - 2) * n : nullptr;
    const double* mid = r >= 1 && r <= rows_in ? in + (r - 1) * n : nullptr;
    const double* plus = r < rows_in ? in + r * n : nullptr;
    double* o = out.data() + r * w;
    // o[j] = ((vertical pair) + (horizontal pair)) / 4 with input column j - 1.
    auto horiz = [&](std::size_t j) {
      if (!mid) return 0.0;
      const double right = j < n ? mid[j] : 0.0;
      return j >= 2 ? right + mid[j - 2] : right;
    };
    o[0] = (0.0 + horiz(0)) / 4.0;
    o[w - 1] = (0.0 + horiz(w - 1)) / 4.0;
    if (mid && n >= 2) {
      // Columns 2 .. n-1 have both horizontal neighbors.
      if (minus && plus) {
        for (std::size_t j = 2; j < n; ++j) o[j] = ((minus[j - 1] + plus[j - 1]) + (mid[j] + mid[j - 2])) / 4.0;
      } else if (minus || plus) {
        const double* one = minus ? minus : plus;
        for (std::size_t j = 2; j < n; ++j) o[j] = (one[j - 1] + (mid[j] + mid[j - 2])) / 4.0;
      } else {
        for (std::size_t j = 2; j < n; ++j) o[j] = (0.0 + (mid[j] + mid[j - 2])) / 4.0;
      }
      for (std::size_t j : {std::size_t{1}, n}) {
        const double vert = (minus ? minus[j - 1] : 0.0) + (plus ? plus[j - 1] : 0.0);
        o[j] = (vert + horiz(j)) / 4.0;
      }
    } else {
      for (std::size_t j = 1; j <= n; ++j) {
        const double vert = (minus ? minus[j - 1] : 0.0) + (plus ? plus[j - 1] : 0.0);
        o[j] = (vert + horiz(j)) / 4.0;
      }
    }
  }
  Box ob{Coord{ib.lo[0] - 1, ib.lo[1] - 1}, Coord{ib.extents[0] + 2, ib.extents[1] + 2}};
  return Field(std::move(ob), std::move(out), Field::Unchecked{});
}

Field neighbor_average(const Field& v) {
  return neighbor_average(v, std::vector<double>{});
}

Field neighbor_average(const Field& v, std::vector<double>&& storage) {
  const int d = v.dim();
  std::vector<double> out = std::move(storage);
  if (d == 1) return neighbor_average_1d(v, out);
  if (d == 2) return neighbor_average_2d(v, out);

  const Box& ib = v.box();
  Box ob{ib.lo, ib.extents};
  for (int k = 0; k < d; ++k) {
    ob.lo[k] -= 1;
    ob.extents[k] += 2;
  }
  out.assign(ob.cell_count(), 0.0);
  const auto in = v.values();
  const auto is = ib.strides();
  const std::size_t L = static_cast<std::size_t>(d - 1);
  const std::int64_t in_row = ib.extents[L];
  const std::size_t out_row = static_cast<std::size_t>(ob.extents[L]);
  const std::size_t rows = out.size() / out_row;
  const double denom = 2.0 * d;

  // pair[k * out_row + j] = v[n - e_k] + v[n + e_k] for the current row.
  std::vector<double> pair(static_cast<std::size_t>(d) * out_row);
  std::vector<double> sorted(static_cast<std::size_t>(d));
  Coord q(static_cast<std::size_t>(d - 1), 0);  // outer coordinates relative to the output box

  auto in_row_at = [&](std::span<const std::int64_t> outer, int axis, int sign) -> const double* {
    // Input row at (outer - 1) shifted by sign along axis, or nullptr when outside.
    std::size_t base = 0;
    for (int k = 0; k < d - 1; ++k) {
      std::int64_t c = outer[k] - 1 + (k == axis ? sign : 0);
      if (c < 0 || c >= ib.extents[k]) return nullptr;
      base += static_cast<std::size_t>(c) * is[k];
    }
    return in.data() + base;
  };

  for (std::size_t r = 0; r < rows; ++r) {
    std::fill(pair.begin(), pair.end(), 0.0);
    // Last axis: neighbors within the same input row.
    if (const double* row = in_row_at(q, -1, 0)) {
      // Output column j sits over input column j - 1; its neighbors are
      // input columns j - 2 and j.
      double* p = pair.data() + L * out_row;
      const auto n = static_cast<std::size_t>(in_row);
      for (std::size_t j = 0; j < n; ++j) p[j] = row[j];
      for (std::size_t j = 2; j < out_row; ++j) p[j] += row[j - 2];
    }
    // Outer axes: same column in the rows one step away.
    for (int k = 0; k < d - 1; ++k) {
      const double* minus = in_row_at(q, k, -1);
      const double* plus = in_row_at(q, k, +1);
      if (!minus && !plus) continue;
      double* p = pair.data() + static_cast<std::size_t>(k) * out_row;
      for (std::int64_t c = 0; c < in_row; ++c) {
        const double a = minus ? minus[c] : 0.0;
        const double b = plus ? plus[c] : 0.0;
        p[c + 1] = a + b;
      }
    }
    double* o = out.data() + r * out_row;
    if (d == 2) {
      for (std::size_t j = 0; j < out_row; ++j) o[j] = (pair[j] + pair[out_row + j]) / denom;
    } else {
      for (std::size_t j = 0; j < out_row; ++j) {
        for (int k = 0; k < d; ++k) sorted[k] = pair[static_cast<std::size_t>(k) * out_row + j];
        std::sort(sorted.begin(), sorted.end());
        double s = 0.0;
        for (double x : sorted) s += x;
        o[j] = s / denom;
      }
    }
    for (int k = d - 2; k >= 0; --k) {
      if (++q[k] < ob.extents[k]) break;
      q[k] = 0;
    }
  }
  return Field(std::move(ob), std::move(out), Field::Unchecked{});
}

Field neighbor_average(const Field& v, const Params& params) {
  if (params.d != v.dim()) throw DomainError("neighbor_average: field dimension does not match params.d");
  return neighbor_average(v);
}

Field add(const Field& a, const Field& b, double scale_b) {
  const Box box = union_box(a.box(), b.box());
  std::vector<double> out(box.cell_count(), 0.0);
  const auto strides = box.strides();
  auto accumulate = [&](const Field& f, double scale) {
    f.for_each([&](std::span<const std::int64_t> n, double x) {
      if (x == 0.0) return;
      std::size_t idx = 0;
      for (std::size_t k = 0; k < n.size(); ++k) idx += static_cast<std::size_t>(n[k] - box.lo[k]) * strides[k];
      out[idx] += scale * x;
    });
  };
  accumulate(a, 1.0);
  accumulate(b, scale_b);
  return Field(box, std::move(out));
}

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

double l1_norm(const Field& v) {
  double sum = 0.0;
  double c = 0.0;
  for (double raw : v.values()) {
    const double x = std::abs(raw);
    const double t = sum + x;
    c += sum >= x ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

double sup_norm(const Field& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, x);
  return m;
}

double max_abs(const Field& v) {
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  return m;
}

SiteValue argmax(const Field& v) {
  const auto vals = v.values();
  const auto it = std::max_element(vals.begin(), vals.end());
  return SiteValue{v.box().coord_of(static_cast<std::size_t>(it - vals.begin())), *it};
}

SiteValue max_excess(const Field& lower, const Field& upper) {
  const Field diff = add(lower, upper, -1.0);
  // The zero cells outside the union count too; a tight diff box may hide them.
  SiteValue best = argmax(diff);
  if (best.value < 0.0 && diff.support_size() == diff.cell_count()) {
    // Some lattice site outside the box has difference 0 > best.
    Coord outside = diff.box().lo;
    outside[0] -= 1;
    best = SiteValue{outside, 0.0};
  }
  return best;
}

}  // namespace dsheat
