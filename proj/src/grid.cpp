#include "tailwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tailwave {

namespace {

std::int64_t to_steps(double extent, double h, const char* what) {
  const double ratio = extent / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0) {
    throw std::invalid_argument(std::string(what) + " must be at least one grid spacing");
  }
  if (rounded > 1e9) {
    throw GridTooLargeError(std::string(what) + "/h exceeds the supported index range");
  }
  return static_cast<std::int64_t>(rounded);
}

}  // namespace

std::size_t NullGrid::count_nodes(std::int64_t n_t, std::int64_t n_v) {
  if (n_t < 1 || n_v < 1 || n_v > 2 * n_t) {
    throw std::invalid_argument("count_nodes: need 1 <= n_v <= 2 n_t");
  }
  // Rows with u <= 0 start on t = 0 and end at v = v_max.
  const std::int64_t past = (n_v + 1) * (n_v + 2) / 2;
  // Rows with u = a h > 0 start on the axis; they end at v_max while
  // a <= 2 n_t - n_v and at t = t_max afterwards.
  const std::int64_t a_max = std::min(n_t, n_v);
  const std::int64_t a_star = 2 * n_t - n_v;
  const std::int64_t k = std::min(a_star, a_max);
  std::int64_t future = k * (n_v + 1) - k * (k + 1) / 2;
  if (k < a_max) {
    const std::int64_t c = a_max - k;
    future += c * (2 * n_t + 1) - (a_max * (a_max + 1) - k * (k + 1));
  }
  return static_cast<std::size_t>(past + future);
}

std::shared_ptr<const NullGrid> NullGrid::make(double h, double t_max, double v_max,
                                               std::size_t node_budget) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("grid spacing h must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be > 0");
  const std::int64_t n_t = to_steps(t_max, h, "t_max");
  std::int64_t n_v = 2 * n_t;
  if (v_max > 0.0) {
    n_v = to_steps(v_max, h, "v_max");
    if (n_v > 2 * n_t) throw std::invalid_argument("v_max may not exceed 2 t_max");
  }
  const std::size_t count = count_nodes(n_t, n_v);
  if (count > node_budget) {
    std::ostringstream os;
    os << "grid with h=" << h << ", t_max=" << t_max << " needs " << count
       << " nodes, above the budget of " << node_budget;
    throw GridTooLargeError(os.str());
  }
  return std::shared_ptr<const NullGrid>(new NullGrid(h, n_t, n_v));
}

NullGrid::NullGrid(double h, std::int64_t n_t, std::int64_t n_v)
    : h_(h), n_t_(n_t), n_v_(n_v), n_rows_(n_v + std::min(n_t, n_v) + 1) {
  offsets_ = std::make_unique<std::size_t[]>(static_cast<std::size_t>(n_rows_) + 1);
  std::size_t acc = 0;
  for (std::int64_t i = 0; i < n_rows_; ++i) {
    offsets_[i] = acc;
    const int a = static_cast<int>(i - n_v_);
    acc += static_cast<std::size_t>(row_hi(a) - row_lo(a) + 1);
  }
  offsets_[n_rows_] = acc;
  node_count_ = acc;
}

int NullGrid::row_hi(int a) const {
  if (a <= 0) return static_cast<int>(n_v_);
  return static_cast<int>(std::min<std::int64_t>(n_v_, 2 * n_t_ - a));
}

std::size_t NullGrid::row_offset(int i) const { return offsets_[i]; }

bool NullGrid::contains(int i, int j) const {
  if (i < 0 || i >= n_rows_) return false;
  return j >= row_begin(i) && j < row_end(i);
}

std::string NullGrid::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "h=" << h_ << " t_max=" << t_max() << " v_max=" << v_max() << " nodes=" << node_count_;
  return os.str();
}

}  // namespace tailwave
