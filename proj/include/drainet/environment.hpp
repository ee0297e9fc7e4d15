#ifndef DRAINET_ENVIRONMENT_HPP
#define DRAINET_ENVIRONMENT_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <utility>
#include <vector>

#include "drainet/common.hpp"
#include "drainet/rng.hpp"

namespace drainet {

struct EnvParams {
  double p = 0.5;        // open probability
  double epsilon = 0.0;  // branching probability at ties
  u64 seed = 1;
  i64 r_max = 0;  // 0 -> ceil(60/p)

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("EnvParams: p must be in (0,1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("EnvParams: epsilon must be in [0,1]");
    if (r_max < 0) throw std::invalid_argument("EnvParams: r_max must be >= 0");
  }

  i64 effective_r_max() const {
    return r_max > 0 ? r_max : static_cast<i64>(std::ceil(60.0 / p));
  }
};

struct CellState {
  bool open = false;
  int theta = 1;  // -1, 0, +1
};

template <class E>
concept EnvironmentModel = requires(const E& e, i64 x, i64 t) {
  { e.open(x, t) } -> std::convertible_to<bool>;
  { e.theta(x, t) } -> std::convertible_to<int>;
  { e.r_max() } -> std::convertible_to<i64>;
};

// The lazily evaluated environment over all of Z^2: (open, theta) per cell
// as a pure function of (seed, x, t). theta is sampled for every cell,
// open or not, keeping the contract a pure function of the coordinates.
class HashedEnvironment {
 public:
  explicit HashedEnvironment(EnvParams params) : params_(params) {
    params_.validate();
    r_max_ = params_.effective_r_max();
  }

  bool open(i64 x, i64 t) const {
    return to_u01(cell_hash(params_.seed, x, t, 0)) < params_.p;
  }

  int theta(i64 x, i64 t) const {
    const double u = to_u01(cell_hash(params_.seed, x, t, 1));
    if (u < params_.epsilon) return 0;
    return u < params_.epsilon + (1.0 - params_.epsilon) * 0.5 ? -1 : 1;
  }

  CellState cell_state(Cell z) const { return CellState{open(z.x, z.t), theta(z.x, z.t)}; }

  i64 r_max() const { return r_max_; }
  const EnvParams& params() const { return params_; }

 private:
  EnvParams params_;
  i64 r_max_ = 0;
};

// Base environment with finitely many cells forced open or closed.
// Cells are independent, so forcing is exact conditioning; estimators use
// it to pin path start cells open.
template <EnvironmentModel E>
class OverlayEnvironment {
 public:
  explicit OverlayEnvironment(const E& base) : base_(&base) {}

  OverlayEnvironment& force_open(Cell z) { return force(z, true); }
  OverlayEnvironment& force_closed(Cell z) { return force(z, false); }

  bool open(i64 x, i64 t) const {
    if (t >= t_lo_ && t <= t_hi_) {
      for (const auto& [cell, value] : forced_)
        if (cell.x == x && cell.t == t) return value;
    }
    return base_->open(x, t);
  }

  int theta(i64 x, i64 t) const { return base_->theta(x, t); }
  i64 r_max() const { return base_->r_max(); }

 private:
  OverlayEnvironment& force(Cell z, bool value) {
    forced_.emplace_back(z, value);
    t_lo_ = std::min(t_lo_, z.t);
    t_hi_ = std::max(t_hi_, z.t);
    return *this;
  }

  const E* base_;
  std::vector<std::pair<Cell, bool>> forced_;
  i64 t_lo_ = 1, t_hi_ = 0;  // empty range until a cell is forced
};

enum class Side { Left, Right, Either };

// Smallest k >= 1 with (x+k, t) open.
template <EnvironmentModel E>
i64 k_right(const E& env, i64 x, i64 t) {
  const i64 r = env.r_max();
  for (i64 k = 1; k <= r; ++k)
    if (env.open(x + k, t)) return k;
  throw RadiusExceeded("no open cell within r_max to the right");
}

// Smallest k >= 1 with (x-k, t) open.
template <EnvironmentModel E>
i64 k_left(const E& env, i64 x, i64 t) {
  const i64 r = env.r_max();
  for (i64 k = 1; k <= r; ++k)
    if (env.open(x - k, t)) return k;
  throw RadiusExceeded("no open cell within r_max to the left");
}

// Nearest open cell in the row of z. Side::Left / Side::Right exclude the
// column of z; Side::Either includes it, and prefers the right cell on an
// exact distance tie.
template <EnvironmentModel E>
Cell nearest_open(const E& env, Cell z, Side side) {
  switch (side) {
    case Side::Left:
      return Cell{z.x - k_left(env, z.x, z.t), z.t};
    case Side::Right:
      return Cell{z.x + k_right(env, z.x, z.t), z.t};
    case Side::Either:
      break;
  }
  if (env.open(z.x, z.t)) return z;
  const i64 r = env.r_max();
  for (i64 k = 1; k <= r; ++k) {
    if (env.open(z.x + k, z.t)) return Cell{z.x + k, z.t};
    if (env.open(z.x - k, z.t)) return Cell{z.x - k, z.t};
  }
  throw RadiusExceeded("no open cell within r_max on either side");
}

}  // namespace drainet

#endif
