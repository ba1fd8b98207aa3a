#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dsheat/errors.hpp"
#include "dsheat/kernel.hpp"

namespace dsheat {

KernelStream::KernelStream(int d, std::size_t cell_budget)
    : current_(Field::point(Coord(static_cast<std::size_t>(d), 0), 1.0)), budget_(cell_budget) {
  if (d < 1) throw DomainError("KernelStream: d must be >= 1");
}

double KernelStream::origin() const {
  return current_.at(Coord(static_cast<std::size_t>(current_.dim()), 0));
}

void KernelStream::advance() {
  std::size_t next = 1;
  for (auto e : current_.box().extents) next *= static_cast<std::size_t>(e + 2);
  if (next > budget_) throw ResourceLimitError("KernelStream: next slice exceeds the cell budget");
  Field advanced = neighbor_average(current_, std::move(spare_));
  spare_ = std::move(current_).release();
  current_ = std::move(advanced);
  ++tau_;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

struct Sorted3 {
  std::int64_t a, b, c;
};

inline Sorted3 canonical(std::int64_t x, std::int64_t y, std::int64_t z) {
  x = x < 0 ? -x : x;
  y = y < 0 ? -y : y;
  z = z < 0 ? -z : z;
  if (x > y) std::swap(x, y);
  if (y > z) std::swap(y, z);
  if (x > y) std::swap(x, y);
  return {x, y, z};
}

// Neumaier-compensated sum of stored cells, each weighted by its orbit size
// under axis permutations and sign flips.
class OrbitSum {
 public:
  void add_row(const double* row, std::int64_t b, std::int64_t c, std::int64_t t) {
    const std::int64_t amax = std::min(b, t - c - b);
    std::int64_t a = (t - c - b) & 1;
    if (a == 0 && a <= amax) {
      add(row[0] * weight(0, b, c));
      a = 2;
    }
    // 0 < a < b share one orbit size.
    const std::int64_t interior_end = std::min(amax, b - 1);
    double interior = 0.0;
    for (; a <= interior_end; a += 2) interior += row[a];
    if (interior != 0.0) add(interior * weight(1, std::max<std::int64_t>(b, 2), c));
    for (; a <= amax; a += 2) add(row[a] * weight(a, b, c));
  }
  double value() const { return sum_ + comp_; }

 private:
  static double weight(std::int64_t a, std::int64_t b, std::int64_t c) {
    const int perms = (a == b && b == c) ? 1 : (a == b || b == c) ? 3 : 6;
    return static_cast<double>(perms << ((a != 0) + (b != 0) + (c != 0)));
  }
  void add(double x) {
    const double s = sum_ + x;
    comp_ += sum_ >= x ? (sum_ - s) + x : (x - s) + sum_;
    sum_ = s;
  }
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

SymmetricKernelStream3::SymmetricKernelStream3(std::int64_t max_tau, std::size_t cell_budget)
    : max_tau_(max_tau), layout_(max_tau + 1), width_(max_tau + 2) {
  if (max_tau < 0) throw DomainError("SymmetricKernelStream3: max_tau must be >= 0");
  const auto w = static_cast<std::size_t>(width_);
  row_start_.assign(w * w, kNoRow);
  std::size_t total = 0;
  for (std::int64_t c = 0; c <= layout_; ++c) {
    for (std::int64_t b = 0; b <= std::min(c, layout_ - c); ++b) {
      row_start_[static_cast<std::size_t>(c * width_ + b)] = total;
      total += static_cast<std::size_t>(std::min(b, layout_ - c - b) + 1);
    }
  }
  if (2 * total > cell_budget)
    throw ResourceLimitError("SymmetricKernelStream3: " + std::to_string(2 * total) +
                             " cells exceed the budget of " + std::to_string(cell_budget));
  cur_.assign(total, 0.0);
  prev_.assign(total, 0.0);
  cur_[index(0, 0, 0)] = 1.0;
}

double SymmetricKernelStream3::prev_at(std::int64_t x, std::int64_t y, std::int64_t z) const {
  const auto s = canonical(x, y, z);
  if (s.a + s.b + s.c > layout_) return 0.0;
  return prev_[index(s.a, s.b, s.c)];
}

double SymmetricKernelStream3::at(std::int64_t x, std::int64_t y, std::int64_t z) const {
  const auto s = canonical(x, y, z);
  if (s.a + s.b + s.c > tau_) return 0.0;
  return cur_[index(s.a, s.b, s.c)];
}

void SymmetricKernelStream3::advance() {
  if (tau_ >= max_tau_) throw DomainError("SymmetricKernelStream3: already at max_tau");
  std::swap(cur_, prev_);
  const std::int64_t t = ++tau_;
  // Cells of the wrong parity are zero in both buffers and are never touched.
  const double* __restrict p = prev_.data();
  double* __restrict q = cur_.data();

  auto slow = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
    const double sa = prev_at(a - 1, b, c) + prev_at(a + 1, b, c);
    const double sb = prev_at(a, b - 1, c) + prev_at(a, b + 1, c);
    const double sc = prev_at(a, b, c - 1) + prev_at(a, b, c + 1);
    return (sa + sb + sc) / 6.0;
  };

  OrbitSum total;
  for (std::int64_t c = 0; c <= t; ++c) {
    for (std::int64_t b = 0; b <= std::min(c, t - c); ++b) {
      const std::int64_t amax = std::min(b, t - c - b);
      std::int64_t a = (t - c - b) & 1;
      if (a > amax) continue;
      double* out = q + index(0, b, c);
      const bool fast_row = b >= 1 && b < c;
      if (!fast_row) {
        for (; a <= amax; a += 2) out[a] = slow(a, b, c);
        total.add_row(out, b, c, t);
        continue;
      }
      const double* same = p + index(0, b, c);
      const double* b_lo = p + index(0, b - 1, c);
      const double* b_hi = p + index(0, b + 1, c);
      const double* c_lo = p + index(0, b, c - 1);
      const double* c_hi = p + index(0, b, c + 1);
      if (a == 0) {
        out[0] = slow(0, b, c);
        a = 2;
      }
      // Interior: 1 <= a <= b - 1, all six neighbors already canonical.
      const std::int64_t afast = std::min(amax, b - 1);
      for (; a <= afast; a += 2) {
        const double sa = same[a - 1] + same[a + 1];
        const double sb = b_lo[a] + b_hi[a];
        const double sc = c_lo[a] + c_hi[a];
        out[a] = (sa + sb + sc) / 6.0;
      }
      for (; a <= amax; a += 2) out[a] = slow(a, b, c);
      total.add_row(out, b, c, t);
    }
  }
  mass_ = total.value();
}

double SymmetricKernelStream3::recompute_mass() const {
  OrbitSum total;
  for (std::int64_t c = 0; c <= tau_; ++c) {
    for (std::int64_t b = 0; b <= std::min(c, tau_ - c); ++b) total.add_row(cur_.data() + index(0, b, c), b, c, tau_);
  }
  return total.value();
}

bool SymmetricKernelStream3::parity_zeros_exact() const {
  for (std::int64_t c = 0; c <= layout_; ++c) {
    for (std::int64_t b = 0; b <= std::min(c, layout_ - c); ++b) {
      for (std::int64_t a = 0; a <= std::min(b, layout_ - c - b); ++a) {
        if (((a + b + c + tau_) & 1) != 0 && cur_[index(a, b, c)] != 0.0) return false;
      }
    }
  }
  return true;
}

}  // namespace dsheat
