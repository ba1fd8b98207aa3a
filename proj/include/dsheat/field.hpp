#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dsheat/params.hpp"

namespace dsheat {

/// Lattice point or displacement in Z^d.
using Coord = std::vector<std::int64_t>;

/// Axis-aligned box of lattice cells, stored row-major with the last axis
/// varying fastest.
struct Box {
  Coord lo;
  Coord extents;

  int dim() const { return static_cast<int>(lo.size()); }
  std::size_t cell_count() const;
  bool contains(std::span<const std::int64_t> n) const;
  std::size_t index_of(std::span<const std::int64_t> n) const;
  /// Row-major strides, one per axis.
  std::vector<std::size_t> strides() const;
  Coord coord_of(std::size_t index) const;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Smallest box containing both arguments.
Box union_box(const Box& a, const Box& b);

/// Finitely supported real function on Z^d: a dense box plus an offset.
/// Values outside the box are zero. The stored box is tight: every face
/// carries at least one nonzero value, except for the zero field which
/// is a single zero cell.
class Field {
 public:
  /// Zero field of dimension `dim`.
  explicit Field(int dim = 1);
  /// Takes ownership of `values` laid out over `box`; trims zero faces.
  /// Throws DomainError on size mismatch or non-finite values.
  Field(Box box, std::vector<double> values);

  static Field point(std::span<const std::int64_t> site, double value);
  static Field point(std::initializer_list<std::int64_t> site, double value) {
    return point(std::span<const std::int64_t>(site.begin(), site.size()), value);
  }
  /// Builds a field from (site, value) pairs; repeated sites accumulate.
  static Field from_sites(int dim, const std::vector<std::pair<Coord, double>>& sites);

  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  std::span<const double> values() const { return values_; }
  std::size_t cell_count() const { return values_.size(); }

  double at(std::span<const std::int64_t> n) const;
  double at(std::initializer_list<std::int64_t> n) const {
    return at(std::span<const std::int64_t>(n.begin(), n.size()));
  }

  /// Number of nonzero cells.
  std::size_t support_size() const;
  bool is_zero() const;
  bool all_nonnegative() const;

  /// Calls fn(coord, value) for every cell of the box in row-major order.
  template <class Fn>
  void for_each(Fn&& fn) const;

  /// Sitewise image under fn; fn(0) must be 0 for the result to stay
  /// finitely supported (not checked).
  template <class Fn>
  Field map(Fn&& fn) const;

  /// Moves the value buffer out (for reuse as scratch storage).
  std::vector<double> release() && { return std::move(values_); }

  Field translated(std::span<const std::int64_t> shift) const;
  Field scaled(double factor) const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  struct Unchecked {};
  Field(Box box, std::vector<double> values, Unchecked);
  void trim();

  Box box_;
  std::vector<double> values_;

  friend Field neighbor_average(const Field& v, std::vector<double>&& storage);
  friend Field neighbor_average_1d(const Field& v, std::vector<double>& out);
  friend Field neighbor_average_2d(const Field& v, std::vector<double>& out);
  friend Field add(const Field& a, const Field& b, double scale_b);
};

/// Neighbor average (1/2d) * sum_k (v[n+e_k] + v[n-e_k]). The pair sums are
/// combined in sorted order so the result is exactly symmetric under axis
/// permutations and reflections of the input.
Field neighbor_average(const Field& v);
/// As above, building the result in `storage` so its capacity is reused.
Field neighbor_average(const Field& v, std::vector<double>&& storage);
/// Params overload; only `params.d` is consulted (and must match v.dim()).
Field neighbor_average(const Field& v, const Params& params);

/// a + scale_b * b over the union of both boxes.
Field add(const Field& a, const Field& b, double scale_b = 1.0);

/// Sum of |v_n|, compensated and in row-major order (bit-reproducible).
double l1_norm(const Field& v);
/// Largest value over the support (0 for the zero field).
double sup_norm(const Field& v);
/// Largest |v_n|.
double max_abs(const Field& v);

struct SiteValue {
  Coord site;
  double value = 0.0;
};
/// Site and value of the maximum (first in row-major order on ties).
SiteValue argmax(const Field& v);
/// max over n of (lower_n - upper_n), with the site where it is attained.
SiteValue max_excess(const Field& lower, const Field& upper);

/// Sum of values, compensated (Neumaier), in the order given.
double compensated_sum(std::span<const double> xs);

// ---------------------------------------------------------------------------

template <class Fn>
void Field::for_each(Fn&& fn) const {
  const int d = dim();
  Coord n = box_.lo;
  const std::size_t count = values_.size();
  for (std::size_t i = 0; i < count; ++i) {
    fn(std::span<const std::int64_t>(n), values_[i]);
    for (int k = d - 1; k >= 0; --k) {
      if (++n[k] < box_.lo[k] + box_.extents[k]) break;
      n[k] = box_.lo[k];
    }
  }
}

template <class Fn>
Field Field::map(Fn&& fn) const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = fn(values_[i]);
  return Field(box_, std::move(out));
}

}  // namespace dsheat
