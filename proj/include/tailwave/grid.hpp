#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace tailwave {

/// Default cap on stored lattice nodes per field (1.2 GB of doubles).
inline constexpr std::size_t kDefaultNodeBudget = 150'000'000;

class GridTooLargeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class OutOfDomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Uniform double-null lattice for the spherically symmetric reduction.
///
/// Nodes sit at u_i = (i - n_v) h and v_j = j h with t = (u+v)/2 and
/// r = (v-u)/2.  Only nodes with r >= 0, 0 <= t <= t_max and v <= v_max are
/// stored.  Each retarded-time level i ("row") is a contiguous run of j.
/// The t = 0 slice is the set of nodes with i + j = n_v.
///
/// v_max defaults to 2 t_max, the full domain of dependence of the initial
/// slice [0, 2 t_max].  Smaller v_max keeps the lattice past-closed, so the
/// stored solution is unchanged wherever it is stored.
class NullGrid {
 public:
  static std::shared_ptr<const NullGrid> make(double h, double t_max, double v_max = 0.0,
                                              std::size_t node_budget = kDefaultNodeBudget);

  /// Closed-form count of stored nodes for integer extents n_t = t_max/h,
  /// n_v = v_max/h (requires 0 < n_v <= 2 n_t).
  static std::size_t count_nodes(std::int64_t n_t, std::int64_t n_v);

  double h() const { return h_; }
  double t_max() const { return n_t_ * h_; }
  double v_max() const { return n_v_ * h_; }
  std::int64_t n_t() const { return n_t_; }
  std::int64_t n_v() const { return n_v_; }

  int n_rows() const { return static_cast<int>(n_rows_); }
  int row_begin(int i) const { return row_lo(i - static_cast<int>(n_v_)); }
  int row_end(int i) const { return row_hi(i - static_cast<int>(n_v_)) + 1; }
  std::size_t row_offset(int i) const;
  std::size_t node_count() const { return node_count_; }

  double u(int i) const { return static_cast<double>(i - n_v_) * h_; }
  double v(int j) const { return static_cast<double>(j) * h_; }
  double t(int i, int j) const { return 0.5 * static_cast<double>(i - n_v_ + j) * h_; }
  double r(int i, int j) const { return 0.5 * static_cast<double>(j - i + n_v_) * h_; }
  /// r in units of h/2 (exact integer).
  int r_half_steps(int i, int j) const { return j - i + static_cast<int>(n_v_); }
  /// t in units of h/2 (exact integer).
  int t_half_steps(int i, int j) const { return i - static_cast<int>(n_v_) + j; }

  bool contains(int i, int j) const;
  std::size_t index(int i, int j) const { return row_offset(i) + static_cast<std::size_t>(j - row_begin(i)); }

  bool same_lattice(const NullGrid& other) const {
    return h_ == other.h_ && n_t_ == other.n_t_ && n_v_ == other.n_v_;
  }
  std::string describe() const;

 private:
  NullGrid(double h, std::int64_t n_t, std::int64_t n_v);

  int row_lo(int a) const { return a < 0 ? -a : a; }
  int row_hi(int a) const;

  double h_;
  std::int64_t n_t_;
  std::int64_t n_v_;
  std::int64_t n_rows_;
  std::size_t node_count_;
  std::unique_ptr<std::size_t[]> offsets_;
};

using GridPtr = std::shared_ptr<const NullGrid>;

}  // namespace tailwave
